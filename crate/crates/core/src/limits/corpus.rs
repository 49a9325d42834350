use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blowup::{parse_polynomial, BranchParametrization, Polynomial, DEFAULT_BRANCH_PRECISION};
use crate::toric::{Cone2D, LatticePoint};
use crate::Rational;

pub const CORPUS_SEED: u64 = 0x5eed_0052;

/// `count` polynomials with 1 to 3 terms of degree `1..=max_degree` and
/// small rational coefficients.
pub fn random_polynomials(vars: usize, count: usize, max_degree: u32, seed: u64) -> Vec<Polynomial<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let terms = rng.gen_range(1..=3);
        let p = Polynomial::from_terms(
            vars,
            (0..terms).map(|_| {
                let deg = rng.gen_range(1..=max_degree.max(1));
                let mut e = vec![0u32; vars];
                for _ in 0..deg {
                    e[rng.gen_range(0..vars)] += 1;
                }
                let num = rng.gen_range(1..=4i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
                let den = rng.gen_range(1..=3i64);
                (e, Rational::new(num.into(), den.into()))
            }),
        );
        if !p.is_zero() {
            out.push(p);
        }
    }
    out
}

/// Monomial-type elements `x^i y^j z^k (xy - z²)^l` followed by random
/// polynomials in `x, y, z`.
pub fn quadric_corpus(random: usize, seed: u64) -> Vec<Polynomial<Rational>> {
    let g = parse_polynomial("x*y - z^2", 3).expect("literal");
    let mut out = Vec::new();
    for l in 0..=2u32 {
        for k in 0..=1u32 {
            for (i, j) in [(0, 0), (1, 0), (0, 1), (2, 1)] {
                if i + j + k + l == 0 {
                    continue;
                }
                let mono = Polynomial::monomial(vec![i, j, k], Rational::from_integer(1.into()));
                out.push(mono.mul(&g.pow(l)));
            }
        }
    }
    out.extend(random_polynomials(3, random, 4, seed));
    out
}

fn branch(pairs: &[&[(u64, i64, i64)]]) -> BranchParametrization {
    let pairs: Vec<Vec<(u64, Rational)>> = pairs
        .iter()
        .map(|c| c.iter().map(|&(k, n, d)| (k, Rational::new(n.into(), d.into()))).collect())
        .collect();
    BranchParametrization::from_pairs(&pairs, DEFAULT_BRANCH_PRECISION).expect("valid branch literal")
}

/// Plane branches with rational Puiseux data paired with polynomials whose
/// order along the branch is certified at the default precision.
pub fn branch_corpus() -> Vec<(BranchParametrization, Polynomial<Rational>)> {
    let cusp = branch(&[&[(2, 1, 1)], &[(3, 1, 1)]]);
    let e34 = branch(&[&[(3, 1, 1)], &[(4, 1, 1)]]);
    let e23_5 = branch(&[&[(2, 1, 1)], &[(3, 1, 1), (5, 1, 2)]]);
    let e467 = branch(&[&[(4, 1, 1)], &[(6, 1, 1), (7, 1, 1)]]);
    let smooth = branch(&[&[(1, 1, 1)], &[(2, 2, 3), (3, 1, 1)]]);
    let e35 = branch(&[&[(3, 2, 1)], &[(5, -1, 1)]]);
    let p = |s: &str| parse_polynomial(s, 2).expect("literal");
    vec![
        (cusp.clone(), p("x")),
        (cusp.clone(), p("y")),
        (cusp.clone(), p("y - x")),
        (cusp.clone(), p("y^2 - x^3 + x^4")),
        (cusp, p("x^2 + y^3")),
        (e34.clone(), p("y^3 - x^4 + x^2*y")),
        (e34, p("y - x")),
        (e23_5.clone(), p("y^2 - x^3")),
        (e23_5, p("x*y")),
        (e467.clone(), p("y^2 - x^3")),
        (e467, p("y - x^2")),
        (smooth.clone(), p("y")),
        (smooth, p("3*y - 2*x^2")),
        (e35, p("x^5 + 8*y^3")),
    ]
}

/// Lattice points of the cone with both coordinates in `[0, bound]`.
pub fn toric_corpus(cone: &Cone2D, bound: i64) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for b in 0..=bound {
        for a in 0..=bound {
            if cone.contains([a, b]) {
                out.push([a, b]);
            }
        }
    }
    out
}
