use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use divseries::blowup::{
    exceptional_order, parse_polynomial, BlowupError, BlowupScript, BranchParametrization, BranchSpec,
    HypersurfaceModel, ScriptSpec, TieBreak,
};
use divseries::limits::{
    branch_series_family, check_sandwich, check_series_convergence, quadric_corpus, quadric_series_family,
    random_polynomials, toric_corpus, toric_series_family, BranchFamily, FiltrationFamily, LimitsError,
    QuadricFamily, SandwichOutcome, SandwichReport, ToricFamily, CORPUS_SEED,
};
use divseries::scalar::Rat;
use divseries::series::{
    default_var_names, fmt_rat, parse_rational_expr, show_series, write_series, SeriesError, TruncatedSeries,
};
use divseries::text::ParseError;
use divseries::toric::{
    arrow_first_tracking, compute_zo, dual_exponent, poincare_toric_closed, poincare_toric_enumerated,
    reduce_zo_to_p, Cone2D, ConeSpec, GraphSpec, PlumbingGraph, ToricError, WeightVector,
};
use divseries::Integer;

/// Text to print and the exit status it goes with.
pub struct Outcome {
    pub text: String,
    pub status: u8,
}

impl Outcome {
    fn verdict(text: String, ok: bool) -> Self {
        Self {
            text,
            status: if ok { 0 } else { 1 },
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: u8,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            status: 2,
            message: message.into(),
        }
    }
}

impl From<BlowupError> for CliError {
    fn from(e: BlowupError) -> Self {
        let status = match e {
            BlowupError::Uncertified { .. } | BlowupError::InsufficientPrecision { .. } => 3,
            _ => 2,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl From<LimitsError> for CliError {
    fn from(e: LimitsError) -> Self {
        match e {
            LimitsError::Blowup(b) => b.into(),
            other => Self::invalid(other.to_string()),
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Self::invalid(e.to_string())
            }
        })*
    };
}

invalid_from!(ToricError, SeriesError, ParseError);

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<PathBuf>, s: &TruncatedSeries<Integer>) -> Result<(), CliError> {
    if let Some(path) = path {
        std::fs::write(&path, write_series(s)).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn rat(order: u64) -> Rat {
    Rat::from_integer(order as i64)
}

fn pair(v: &[i64]) -> (i64, i64) {
    (v[0], v[1])
}

pub fn parse_weight(s: &str) -> Result<[i64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok([
            a.parse().map_err(|_| format!("bad weight component {a:?}"))?,
            b.parse().map_err(|_| format!("bad weight component {b:?}"))?,
        ]),
        _ => Err(format!("expected a,b, got {s:?}")),
    }
}

fn build_cone(cyclic: Option<Vec<i64>>, cone: Option<PathBuf>) -> Result<Cone2D, CliError> {
    match (cyclic, cone) {
        (Some(c), _) => {
            let (n, q) = pair(&c);
            Ok(Cone2D::cyclic_quotient(n, q)?)
        }
        (None, Some(path)) => Ok(read_json::<ConeSpec>(&path)?.build()?),
        (None, None) => Err(CliError::invalid("give --cyclic N Q or --cone FILE")),
    }
}

pub fn toric_poincare(
    cyclic: Option<Vec<i64>>,
    cone: Option<PathBuf>,
    weight: Vec<[i64; 2]>,
    m: Option<i64>,
    order: u64,
    output: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let cone = build_cone(cyclic, cone)?;
    let weights: Vec<WeightVector> = match m {
        Some(m) => vec![WeightVector::tower(m)],
        None => weight.iter().map(|&[a, b]| WeightVector::new(a, b)).collect(),
    };
    if weights.is_empty() {
        return Err(CliError::invalid("give --weight a,b or --m M"));
    }
    let enumerated: TruncatedSeries<Integer> = poincare_toric_enumerated(&cone, &weights, order)?;
    let names = default_var_names(weights.len());

    let mut out = String::new();
    let [g1, g2] = [cone.gen1(), cone.gen2()];
    let _ = writeln!(out, "cone: ({},{}) ({},{})", g1[0], g1[1], g2[0], g2[1]);
    let ws: Vec<String> = weights.iter().map(|w| format!("({},{})", w.0[0], w.0[1])).collect();
    let _ = writeln!(out, "weights: {}", ws.join(" "));
    let mut ok = true;
    if let [w] = weights.as_slice() {
        let closed = poincare_toric_closed::<Integer>(&cone, w)?;
        let agree = closed.expand(rat(order))?.equal_up_to(&enumerated, rat(order))?.is_equal();
        let _ = writeln!(out, "closed: {closed}");
        let _ = writeln!(out, "enumerated: {}", show_series(&enumerated, &names));
        let _ = writeln!(out, "verdict: {}", if agree { "AGREE" } else { "DISAGREE" });
        ok = agree;
    } else {
        let _ = writeln!(out, "enumerated: {}", show_series(&enumerated, &names));
    }
    write_output(output, &enumerated)?;
    Ok(Outcome::verdict(out, ok))
}

pub fn zo(
    graph: Option<PathBuf>,
    cyclic: Option<Vec<i64>>,
    blowups: u32,
    reduce: Option<String>,
    order: u64,
    output: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let mut g = match (graph, cyclic) {
        (Some(path), _) => PlumbingGraph::from_spec(&read_json::<GraphSpec>(&path)?)?,
        (None, Some(c)) => {
            let (n, q) = pair(&c);
            PlumbingGraph::cyclic_quotient(n, q)?
        }
        (None, None) => return Err(CliError::invalid("give a graph file or --cyclic N Q")),
    };
    if blowups > 0 {
        let arrow = *g
            .arrow_vertices()
            .first()
            .ok_or_else(|| CliError::invalid("--blowups needs a vertex with an arrow"))?;
        g = g.blowup_at_arrow(arrow, blowups)?;
    }
    let tracked = arrow_first_tracking(&g);
    let z = compute_zo::<Integer>(&g, &tracked)?;
    let names = default_var_names(tracked.len());

    let mut out = String::new();
    let vars: Vec<String> = names.iter().zip(&tracked).map(|(n, v)| format!("{n}=E{v}")).collect();
    let _ = writeln!(out, "variables: {}", vars.join(" "));
    if let Some(&arrow) = g.arrow_vertices().first() {
        let e = dual_exponent(&g, arrow, &tracked)?;
        let _ = writeln!(out, "arrow {}-exponent: {}", names[0], fmt_rat(&e.component(0)));
    }
    let _ = writeln!(out, "Z_o: {z}");
    let series = match reduce {
        Some(var) => {
            let keep = names
                .iter()
                .position(|n| *n == var)
                .or((var == "t").then_some(0))
                .ok_or_else(|| CliError::invalid(format!("unknown variable {var:?}; variables are {}", names.join(", "))))?;
            let p = reduce_zo_to_p(&z, &[keep], rat(order))?;
            let _ = writeln!(out, "P: {}", show_series(&p, &[var]));
            p
        }
        None => z.expand(rat(order))?,
    };
    write_output(output, &series)?;
    Ok(Outcome::verdict(out, true))
}

fn valuation_table<F: FiltrationFamily>(fam: &F, f: &F::Element, m_max: u32) -> Result<String, CliError> {
    let mut out = String::new();
    for m in 0..=m_max {
        let v = fam.valuation(f, 0, m)?;
        let _ = writeln!(out, "m={m} val={v}");
    }
    let _ = writeln!(out, "target={}", fam.target(f, 0)?);
    Ok(out)
}

pub fn blowup_val(
    poly: &str,
    quadric: Option<u32>,
    script: Option<PathBuf>,
    dim: usize,
    branch: Option<PathBuf>,
    m: Option<u32>,
) -> Result<Outcome, CliError> {
    let text = if let Some(m) = quadric {
        let f = parse_polynomial(poly, 3)?;
        valuation_table(&QuadricFamily, &f, m)?
    } else if let Some(path) = script {
        let script = BlowupScript::from_spec(&read_json::<ScriptSpec>(&path)?, dim)?;
        let f = parse_polynomial(poly, script.dim())?;
        let v = exceptional_order(&f, &script)?;
        format!("val={v}\n")
    } else if let Some(path) = branch {
        let gamma = BranchParametrization::from_spec(&read_json::<BranchSpec>(&path)?)?;
        let f = parse_polynomial(poly, gamma.dim())?;
        let fam = BranchFamily::new(gamma)?;
        let mut text = format!("resolution={}\n", fam.resolution());
        text.push_str(&valuation_table(&fam, &f, m.unwrap_or(0))?);
        text
    } else {
        return Err(CliError::invalid("give --quadric M, --script FILE or --branch FILE --m M"));
    };
    Ok(Outcome::verdict(text, true))
}

pub fn hyp_poincare(m: u32, order: u64, output: Option<PathBuf>) -> Result<Outcome, CliError> {
    let h = HypersurfaceModel::new(m);
    let p = h.poincare::<Integer>();
    let s = p.expand(rat(order))?;
    let dims_agree = (0..=order).all(|l| s.coeff_at(l) == Integer::from(h.dim_quotient(l)));
    let fe = h.functional_equation_holds::<Integer>();
    let mut out = String::new();
    let _ = writeln!(out, "P: {p}");
    let _ = writeln!(out, "series: {}", show_series(&s, &default_var_names(1)));
    let _ = writeln!(out, "dims: {}", if dims_agree { "AGREE" } else { "DISAGREE" });
    let _ = writeln!(out, "functional equation: {}", if fe { "holds" } else { "fails" });
    write_output(output, &s)?;
    Ok(Outcome::verdict(out, dims_agree && fe))
}

fn sandwich_text(rep: &SandwichReport, verbose: bool) -> String {
    if verbose {
        return rep.to_text();
    }
    let full = rep.to_text();
    let lines: Vec<&str> = full.lines().collect();
    let (summary, body) = lines.split_last().expect("summary line");
    let mut out = String::new();
    for (line, l) in body.iter().zip(&rep.lines) {
        if l.outcome != SandwichOutcome::Ok {
            let _ = writeln!(out, "{line}");
        }
    }
    let _ = writeln!(out, "{summary}");
    out
}

pub fn converge(
    toric: Option<Vec<i64>>,
    quadric: bool,
    branch: Option<PathBuf>,
    order: u64,
    mmax: Option<u32>,
    verbose: bool,
) -> Result<Outcome, CliError> {
    let m_max = mmax.unwrap_or(order as u32);
    if (m_max as u64) < order {
        return Err(CliError::invalid(format!("--mmax {m_max} must be at least the order {order}")));
    }
    let (limit, conv, sandwich) = if let Some(c) = toric {
        let (n, q) = pair(&c);
        let cone = Cone2D::cyclic_quotient(n, q)?;
        let fam = toric_series_family(&cone, order, m_max)?;
        let corpus = toric_corpus(&cone, order.max(1) as i64);
        (
            "1/(1 - t)".to_string(),
            check_series_convergence(&fam, order)?,
            check_sandwich(&ToricFamily { cone }, &corpus, m_max)?,
        )
    } else if quadric {
        let fam = quadric_series_family(order, m_max)?;
        (
            HypersurfaceModel::limit::<Integer>().to_string(),
            check_series_convergence(&fam, order)?,
            check_sandwich(&QuadricFamily, &quadric_corpus(10, CORPUS_SEED), m_max)?,
        )
    } else if let Some(path) = branch {
        let gamma = BranchParametrization::from_spec(&read_json::<BranchSpec>(&path)?)?;
        let fam = branch_series_family(&gamma, TieBreak::First, order, m_max)?;
        let mut corpus = ["x", "y", "y - x"]
            .iter()
            .map(|s| parse_polynomial(s, 2))
            .collect::<Result<Vec<_>, _>>()?;
        corpus.extend(random_polynomials(2, 7, 3, CORPUS_SEED));
        let limit = show_series(&fam.limit, &default_var_names(1));
        (
            limit,
            check_series_convergence(&fam, order)?,
            check_sandwich(&BranchFamily::new(gamma)?, &corpus, m_max)?,
        )
    } else {
        return Err(CliError::invalid("give --toric N Q, --quadric or --branch FILE"));
    };
    let ok = conv.passed() && sandwich.passed();
    let mut out = String::new();
    let _ = writeln!(out, "limit: {limit}");
    out.push_str(&conv.to_text());
    out.push_str(&sandwich_text(&sandwich, verbose));
    let _ = writeln!(out, "status={}", if ok { "PASS" } else { "FAIL" });
    Ok(Outcome::verdict(out, ok))
}

pub fn expand(expr: &str, vars: &str, order: u64, output: Option<PathBuf>) -> Result<Outcome, CliError> {
    let names: Vec<String> = vars.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
    if names.is_empty() {
        return Err(CliError::invalid("--vars needs at least one name"));
    }
    let e = parse_rational_expr::<Integer>(expr, &names)?;
    let s = e.expand(rat(order))?;
    let mut out = String::new();
    let _ = writeln!(out, "expr: {}", e.display_with(&names));
    let _ = writeln!(out, "series: {}", show_series(&s, &names));
    write_output(output, &s)?;
    Ok(Outcome::verdict(out, true))
}
