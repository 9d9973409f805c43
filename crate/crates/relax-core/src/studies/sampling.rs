use super::{Measurement, StudyOptions};
use crate::automaton::{
    build_gate_set, estimate_autocorrelation, markov_oracle, ImpurityKind, ImpuritySpec, ModelId, SamplerOptions,
    DEFAULT_STATE_CAP,
};
use crate::error::Result;
use crate::series::CorrelationSeries;

/// Largest CA time compared against the oracle.
pub const ORACLE_T_MAX: u64 = 200;
/// Agreement threshold in standard errors.
pub const ORACLE_SIGMAS: f64 = 4.0;
/// Required fraction of agreeing points.
pub const ORACLE_FRACTION: f64 = 0.99;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub model: ModelId,
    pub l: usize,
    pub impurity: Option<ImpuritySpec>,
}

/// The eight model/impurity combinations of the oracle check.
pub fn oracle_cases() -> Vec<OracleCase> {
    let case = |model, l, imp: Option<(ImpurityKind, Vec<usize>)>| OracleCase {
        model,
        l,
        impurity: imp.map(|(k, s)| ImpuritySpec::new(k, &s)),
    };
    vec![
        case(ModelId::U1Half, 6, None),
        case(ModelId::U1Half, 6, Some((ImpurityKind::Flip, vec![1]))),
        case(ModelId::DipHalfW4W5, 8, None),
        case(ModelId::DipHalfW4W5, 8, Some((ImpurityKind::Swap, vec![1, 2]))),
        case(ModelId::DipHalfW4W5, 8, Some((ImpurityKind::Flip, vec![1, 2, 3]))),
        case(ModelId::TJz, 5, None),
        case(ModelId::TJz, 5, Some((ImpurityKind::Resample, vec![5]))),
        case(ModelId::DipOneH3, 5, None),
        case(ModelId::DipOneH3, 5, Some((ImpurityKind::Resample, vec![4, 5]))),
    ]
}

/// Counts points with `|estimate - exact| <= sigmas * stderr`.  Points with
/// a zero error bar must agree to `1e-12`.
pub fn agreeing_points(est: &[CorrelationSeries], exact: &[CorrelationSeries], sigmas: f64) -> (usize, usize) {
    let mut ok = 0;
    let mut total = 0;
    for (e, x) in est.iter().zip(exact) {
        for i in 0..e.len() {
            let diff = (e.values[i] - x.values[i]).abs();
            let s = e.std_errors[i];
            total += 1;
            if diff <= sigmas * s || diff <= 1e-12 {
                ok += 1;
            }
        }
    }
    (ok, total)
}

pub fn oracle_equivalence(opts: &StudyOptions) -> Result<Vec<Measurement>> {
    let times: Vec<u64> = (0..=ORACLE_T_MAX).collect();
    let mut out = Vec::new();
    for c in oracle_cases() {
        let gs = build_gate_set(c.model, c.l, c.impurity.as_ref())?;
        let sites: Vec<usize> = (1..=c.l).collect();
        let exact = markov_oracle(&gs, &sites, &times, DEFAULT_STATE_CAP)?;
        let est = estimate_autocorrelation(&gs, &sites, &times, opts.samples, opts.seed, SamplerOptions { budget: opts.budget })?;
        let (ok, total) = agreeing_points(&est, &exact, ORACLE_SIGMAS);
        let frac = ok as f64 / total as f64;
        out.push(Measurement::at_least(
            format!("{} L={} impurity={} agreeing fraction", c.model, c.l, ImpuritySpec::describe(c.impurity.as_ref())),
            frac,
            ORACLE_FRACTION,
        ));
    }
    Ok(out)
}
