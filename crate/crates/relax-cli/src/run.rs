//! Executes a descriptor and collects its output files in memory.

use relax_core::automaton::{build_gate_set, estimate_autocorrelation, markov_oracle, ImpurityKind, ImpuritySpec, SamplerOptions, DEFAULT_BUDGET, DEFAULT_STATE_CAP};
use relax_core::continuum::asymptotic_law;
use relax_core::hydro::{build_dipole, build_u1, spectral_correlation, Boundary, DipoleImpurity, SiteImpurity, J4_DEFAULT, J5_DEFAULT};
use relax_core::series::{CorrelationSeries, SeriesMeta};
use relax_core::superham::{build_super_hamiltonian, effective_correlation_tjz, parent_h0, super_gap, two_impurity_effective, TwoImpurityModel, DEFAULT_SUPER_CAP};
use relax_core::Error;

use crate::descriptor::{Engine, ExperimentDescriptor, SuperhamQuantity};

/// Seed used when neither the descriptor nor the command line sets one.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Command-line overrides applied on top of a descriptor.
#[derive(Debug, Clone, Copy)]
pub struct RunSettings {
    pub seed: Option<u64>,
    pub budget: u128,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { seed: None, budget: DEFAULT_BUDGET }
    }
}

/// One output file, named relative to the run directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub contents: String,
}

pub fn run(desc: &ExperimentDescriptor, settings: &RunSettings) -> Result<Vec<OutputFile>, Error> {
    desc.validate()?;
    match desc.engine {
        Engine::Automaton | Engine::Oracle => run_automaton(desc, settings),
        Engine::Hydro => run_hydro(desc),
        Engine::Continuum => run_continuum(desc),
        Engine::Superham => run_superham(desc),
    }
}

fn series_files(id: &str, series: &[CorrelationSeries]) -> Vec<OutputFile> {
    series
        .iter()
        .map(|s| OutputFile { name: format!("{id}_j{}.csv", s.site), contents: s.to_csv() })
        .collect()
}

fn run_automaton(desc: &ExperimentDescriptor, settings: &RunSettings) -> Result<Vec<OutputFile>, Error> {
    let l = desc.size()?;
    let imp = desc.impurity_spec(l);
    let gs = build_gate_set(desc.model_id()?, l, imp.as_ref())?;
    let times = desc.time.steps();
    let series = match desc.engine {
        Engine::Oracle => markov_oracle(&gs, &desc.probes, &times, DEFAULT_STATE_CAP)?,
        _ => {
            let seed = settings.seed.or(desc.seed).unwrap_or(DEFAULT_SEED);
            let samples = desc.samples.unwrap_or_default();
            estimate_autocorrelation(&gs, &desc.probes, &times, samples, seed, SamplerOptions { budget: settings.budget })?
        }
    };
    Ok(series_files(&desc.id, &series))
}

fn run_hydro(desc: &ExperimentDescriptor) -> Result<Vec<OutputFile>, Error> {
    let l = desc.size()?;
    let model = desc.model_id()?;
    let imp = desc.impurity_spec(l);
    let g = desc.impurity_strength();
    let h = match model {
        relax_core::automaton::ModelId::U1Half => {
            let bc = if desc.periodic { Boundary::Periodic } else { Boundary::Open };
            build_u1(l, bc, imp.as_ref().map(|i| SiteImpurity { site: i.sites[0], g }))?
        }
        _ => {
            let dip = match imp.as_ref().map(|i| i.kind) {
                None => DipoleImpurity::None,
                Some(ImpurityKind::Swap) => DipoleImpurity::ChargePreserving { g },
                Some(_) => DipoleImpurity::FullBreaking { g },
            };
            build_dipole(l, J4_DEFAULT, J5_DEFAULT, dip)?
        }
    };
    let pairs: Vec<(usize, usize)> = desc.probes.iter().map(|&j| (j, j)).collect();
    let mut series = spectral_correlation(&h, &pairs, &desc.time.times())?;
    let meta = SeriesMeta { model: model.to_string(), l, impurity: ImpuritySpec::describe(imp.as_ref()), samples: 0, seed: 0 };
    for s in &mut series {
        s.meta = meta.clone();
    }
    Ok(series_files(&desc.id, &series))
}

fn run_continuum(desc: &ExperimentDescriptor) -> Result<Vec<OutputFile>, Error> {
    let spec = desc.regime.ok_or_else(|| crate::descriptor::invalid("regime", "required"))?;
    let base = desc.params.ok_or_else(|| crate::descriptor::invalid("params", "required"))?;
    let law = asymptotic_law(&spec)?;
    let times = desc.time.times();
    let mut exact = Vec::with_capacity(times.len());
    let mut predicted = Vec::with_capacity(times.len());
    for &t in &times {
        let p = relax_core::continuum::ContinuumParams { t, ..base };
        exact.push(law.exact(&p)?);
        predicted.push(law.predict(&p));
    }
    let meta = SeriesMeta { model: format!("{:?}", spec.symmetry), ..SeriesMeta::default() };
    let file = |suffix: &str, values: Vec<f64>| OutputFile {
        name: format!("{}_{suffix}.csv", desc.id),
        contents: CorrelationSeries::exact(times.clone(), values, 0, meta.clone()).to_csv(),
    };
    Ok(vec![file("exact", exact), file("predicted", predicted)])
}

fn run_superham(desc: &ExperimentDescriptor) -> Result<Vec<OutputFile>, Error> {
    let table = |rows: Vec<(usize, f64)>| {
        let mut out = String::from("l,gap\n");
        for (l, gap) in rows {
            out.push_str(&format!("{l},{gap:.17e}\n"));
        }
        vec![OutputFile { name: format!("{}_gap.csv", desc.id), contents: out }]
    };
    match desc.quantity {
        Some(SuperhamQuantity::Gap) => {
            let model = desc.model_id()?;
            let g = desc.impurity_strength();
            let rows = desc
                .sizes
                .iter()
                .map(|&l| {
                    let op = build_super_hamiltonian(model, l, desc.impurity_spec(l).as_ref(), g, DEFAULT_SUPER_CAP)?;
                    Ok((l, super_gap(&op)?))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(table(rows))
        }
        Some(SuperhamQuantity::SliomHoppingGap) => {
            let rows = desc
                .sizes
                .iter()
                .map(|&l| Ok((l, two_impurity_effective(l, TwoImpurityModel::SliomHopping)?.gap)))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(table(rows))
        }
        Some(SuperhamQuantity::ParentSpectrum) => desc
            .sizes
            .iter()
            .map(|&l| {
                let p = parent_h0(l)?;
                let mut got = p.operator.eigenvalues()?;
                let mut want = p.exact;
                got.sort_by(f64::total_cmp);
                want.sort_by(f64::total_cmp);
                let mut out = String::from("index,energy,closed_form\n");
                for (i, (a, b)) in got.iter().zip(&want).enumerate() {
                    out.push_str(&format!("{i},{a:.17e},{b:.17e}\n"));
                }
                Ok(OutputFile { name: format!("{}_l{l}.csv", desc.id), contents: out })
            })
            .collect(),
        _ => {
            let l = desc.size()?;
            let times = desc.time.times();
            let series = desc
                .probes
                .iter()
                .map(|&j| effective_correlation_tjz(l, j, &times))
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(series_files(&desc.id, &series))
        }
    }
}
