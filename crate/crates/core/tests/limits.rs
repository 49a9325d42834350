use divseries::blowup::{BranchParametrization, ExtOrder, HypersurfaceModel};
use divseries::limits::{
    branch_corpus, branch_series_family, check_sandwich, check_series_convergence, quadric_corpus,
    quadric_series_family, stabilization_bound, toric_corpus, toric_series_family, BranchFamily, LimitsError,
    QuadricFamily, SeriesFamily, ToricFamily, CORPUS_SEED,
};
use divseries::blowup::TieBreak;
use divseries::toric::Cone2D;
use divseries::{BigInt, Rational};

#[test]
fn bound_examples() {
    assert_eq!(stabilization_bound(&[3, 1, 2]).unwrap(), 3);
    assert_eq!(stabilization_bound(&[0, 0, 0]).unwrap(), 0);
    assert_eq!(stabilization_bound(&[7]).unwrap(), 7);
    assert!(matches!(stabilization_bound(&[-1]), Err(LimitsError::NegativeIndex(-1))));
}

#[test]
fn toric_convergence_for_several_cones() {
    for (n, q) in [(5, 2), (2, 1), (7, 3), (9, 4)] {
        let cone = Cone2D::cyclic_quotient(n, q).unwrap();
        let fam = toric_series_family(&cone, 15, 17).unwrap();
        let rep = check_series_convergence(&fam, 15).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
        // the limit 1/(1 - t) has every coefficient 1
        assert!(rep.lines.iter().all(|l| l.limit == vec![BigInt::from(1)]));
        let sw = check_sandwich(&ToricFamily { cone }, &toric_corpus(&cone, 8), 10).unwrap();
        assert!(sw.passed(), "{}", sw.to_text());
    }
}

#[test]
fn quadric_convergence_and_sandwich() {
    let fam = quadric_series_family(15, 16).unwrap();
    let rep = check_series_convergence(&fam, 15).unwrap();
    assert!(rep.passed());
    // agreement from m ≥ ℓ - 1: the first correction is t^{m+2}
    for l in &rep.lines {
        assert_eq!(l.first_m, Some(l.degree.saturating_sub(1) as u32));
    }
    let sw = check_sandwich(&QuadricFamily, &quadric_corpus(30, CORPUS_SEED), 6).unwrap();
    assert!(sw.passed(), "{}", sw.to_text());
    // xy - z² climbs by one per blow-up
    let g = sw.lines.iter().filter(|l| l.element == "x*y - z^2").map(|l| l.valuation.unwrap());
    assert!(g.eq((2..=8).map(ExtOrder::Finite)));
}

#[test]
fn quadric_family_limit_is_the_hypersurface_series() {
    // the last member already agrees with the limit through degree m + 1
    let m = 9;
    let fam = quadric_series_family(m as u64 + 1, m).unwrap();
    assert!(fam.members[&m].equal_up_to(&fam.limit, divseries::scalar::Rat::from_integer(m as i64 + 1)).unwrap().is_equal());
    assert!(HypersurfaceModel::new(m).functional_equation_holds::<BigInt>());
}

#[test]
fn branch_series_and_sandwich() {
    let mut seen = Vec::new();
    for (gamma, f) in branch_corpus() {
        let fam = BranchFamily::new(gamma.clone()).unwrap();
        let sw = check_sandwich(&fam, &[f], 6).unwrap();
        assert!(sw.passed(), "{}", sw.to_text());
        if !seen.contains(&gamma) {
            let series = branch_series_family(&gamma, TieBreak::First, 8, 9).unwrap();
            let rep = check_series_convergence(&series, 8).unwrap();
            assert!(rep.passed(), "{:?}\n{}", gamma, rep.to_text());
            seen.push(gamma);
        }
    }
    assert_eq!(seen.len(), 6);
}

#[test]
fn branch_limit_is_the_semigroup() {
    let r = |n: i64| Rational::from_integer(n.into());
    // <3, 4>: 0, 3, 4, 6, 7, 8, ...
    let gamma = BranchParametrization::from_pairs(&[vec![(3, r(1))], vec![(4, r(1))]], 40).unwrap();
    let fam = branch_series_family(&gamma, TieBreak::First, 9, 9).unwrap();
    let coeffs: Vec<i64> = fam.limit.dense_coeffs(9).iter().map(|c| i64::try_from(c).unwrap()).collect();
    assert_eq!(coeffs, [1, 0, 0, 1, 1, 0, 1, 1, 1, 1]);
}

#[test]
fn convergence_input_errors() {
    let mut fam: SeriesFamily = quadric_series_family(4, 4).unwrap();
    fam.members.remove(&0);
    assert_eq!(check_series_convergence(&fam, 4).unwrap_err(), LimitsError::MissingMember(0));
    let short = quadric_series_family(4, 2).unwrap();
    assert_eq!(check_series_convergence(&short, 4).unwrap_err(), LimitsError::MissingMember(3));
    assert_eq!(check_sandwich(&QuadricFamily, &[], 3).unwrap_err(), LimitsError::EmptyCorpus);
}

