use rand::Rng;

use super::model::{ImpurityKind, ImpuritySpec, ModelId};
use crate::error::{Error, Result};

const NONE: u16 = u16::MAX;

/// What a rule does once its layer is drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleKind {
    /// Move a matched configuration to each of its partners with
    /// probability `flip_probability`.  `table[local]` lists up to two
    /// partners (`u16::MAX` marks an empty slot); two partners occur only
    /// for the middle of the H4 chain 0220-1111-2002.
    Pairs {
        pairs: Vec<(u16, u16)>,
        table: Vec<[u16; 2]>,
        flip_probability: f64,
    },
    /// Resample the single supported site uniformly.
    Resample,
}

/// A local update rule on an ordered support (0-based sites).  Local
/// configurations are encoded base m with the first support site most
/// significant.
#[derive(Debug, Clone, PartialEq)]
pub struct GateRule {
    pub support: Vec<usize>,
    pub kind: RuleKind,
}

impl GateRule {
    /// Builds a pair rule; panics if a configuration has more than two
    /// partners or the partner probabilities exceed one.
    pub fn pairs(support: Vec<usize>, m: usize, pairs: &[(Vec<u8>, Vec<u8>)], flip_probability: f64) -> Self {
        let size = m.pow(support.len() as u32);
        let mut table = vec![[NONE; 2]; size];
        let mut enc = Vec::with_capacity(pairs.len());
        let link = |from: u16, to: u16, table: &mut Vec<[u16; 2]>| {
            let slot = &mut table[from as usize];
            if slot[0] == NONE {
                slot[0] = to;
            } else {
                assert!(slot[1] == NONE && 2.0 * flip_probability <= 1.0, "too many partners");
                slot[1] = to;
            }
        };
        for (a, b) in pairs {
            let ia = encode(a, m) as u16;
            let ib = encode(b, m) as u16;
            link(ia, ib, &mut table);
            link(ib, ia, &mut table);
            enc.push((ia, ib));
        }
        Self { support, kind: RuleKind::Pairs { pairs: enc, table, flip_probability } }
    }

    pub fn resample(site: usize) -> Self {
        Self { support: vec![site], kind: RuleKind::Resample }
    }

    #[inline]
    pub fn local_index(&self, config: &[u8], m: usize) -> usize {
        let mut idx = 0;
        for &s in &self.support {
            idx = idx * m + config[s] as usize;
        }
        idx
    }

    #[inline]
    fn write_local(&self, config: &mut [u8], m: usize, mut idx: usize) {
        for &s in self.support.iter().rev() {
            config[s] = (idx % m) as u8;
            idx /= m;
        }
    }

    /// Every configuration reachable in one firing, with its probability
    /// (used by the exact oracle).
    pub fn outcomes(&self, config: &[u8], m: usize) -> Vec<(Vec<u8>, f64)> {
        match &self.kind {
            RuleKind::Pairs { table, flip_probability, .. } => {
                let idx = self.local_index(config, m);
                let partners: Vec<u16> = table[idx].iter().copied().filter(|&p| p != NONE).collect();
                let stay = 1.0 - flip_probability * partners.len() as f64;
                let mut out = Vec::new();
                if stay > 0.0 {
                    out.push((config.to_vec(), stay));
                }
                if *flip_probability > 0.0 {
                    for p in partners {
                        let mut moved = config.to_vec();
                        self.write_local(&mut moved, m, p as usize);
                        out.push((moved, *flip_probability));
                    }
                }
                out
            }
            RuleKind::Resample => (0..m as u8)
                .map(|v| {
                    let mut c = config.to_vec();
                    c[self.support[0]] = v;
                    (c, 1.0 / m as f64)
                })
                .collect(),
        }
    }

    /// Configurations connected to `config` by this rule (excluding itself).
    pub fn neighbours(&self, config: &[u8], m: usize) -> Vec<Vec<u8>> {
        self.outcomes(config, m)
            .into_iter()
            .map(|(c, _)| c)
            .filter(|c| c.as_slice() != config)
            .collect()
    }
}

pub(crate) fn encode(local: &[u8], m: usize) -> usize {
    local.iter().fold(0, |acc, &s| acc * m + s as usize)
}

/// The full stochastic update of a model.  `layer_weights` has one entry
/// per bulk layer followed by one entry for the impurity layer when an
/// impurity is present.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSet {
    pub model: ModelId,
    pub l: usize,
    pub bulk_layers: Vec<Vec<GateRule>>,
    pub impurity_rules: Vec<GateRule>,
    pub layer_weights: Vec<f64>,
    pub impurity: Option<ImpuritySpec>,
}

/// Bulk transition pairs of each gate family as (support offsets, pairs).
fn bulk_families(model: ModelId) -> Vec<(Vec<usize>, Vec<(Vec<u8>, Vec<u8>)>)> {
    const M: u8 = 0;
    const Z: u8 = 1;
    const P: u8 = 2;
    let w_pair = vec![(vec![1, 0, 0, 1], vec![0, 1, 1, 0])];
    match model {
        ModelId::U1Half => vec![(vec![0, 1], vec![(vec![0, 1], vec![1, 0])])],
        ModelId::DipHalfW4W5 => vec![(vec![0, 1, 2, 3], w_pair.clone()), (vec![0, 1, 3, 4], w_pair)],
        ModelId::DipOneH3 => vec![(vec![0, 1, 2], h3_pairs(M, Z, P))],
        ModelId::DipOneH3H4 => vec![(vec![0, 1, 2], h3_pairs(M, Z, P)), (vec![0, 1, 2, 3], h4_pairs())],
        ModelId::TJz => vec![(vec![0, 1], vec![(vec![1, 0], vec![0, 1]), (vec![2, 0], vec![0, 2])])],
    }
}

fn h3_pairs(m: u8, z: u8, p: u8) -> Vec<(Vec<u8>, Vec<u8>)> {
    vec![
        (vec![z, p, z], vec![p, m, p]),
        (vec![z, p, m], vec![p, m, z]),
        (vec![z, m, z], vec![m, p, m]),
        (vec![z, m, p], vec![m, p, z]),
    ]
}

/// All applications of the charge shift (+1,-1,-1,+1) on spin-1.
pub(crate) fn h4_pairs() -> Vec<(Vec<u8>, Vec<u8>)> {
    let shift = [1i8, -1, -1, 1];
    let mut out = Vec::new();
    for idx in 0..81usize {
        let a: Vec<u8> = (0..4).map(|k| ((idx / 3usize.pow(3 - k)) % 3) as u8).collect();
        let b: Vec<i8> = a.iter().zip(shift).map(|(&x, d)| x as i8 + d).collect();
        if b.iter().all(|&x| (0..3).contains(&x)) {
            out.push((a, b.into_iter().map(|x| x as u8).collect()));
        }
    }
    out
}

fn impurity_rules(model: ModelId, l: usize, spec: &ImpuritySpec) -> Result<Vec<GateRule>> {
    let unsupported = || Error::UnsupportedImpurity { model: model.to_string(), kind: spec.kind.to_string() };
    if spec.sites.is_empty() || spec.sites.iter().any(|&s| s == 0 || s > l) {
        return Err(crate::error::validation(
            "impurity.sites",
            format!("sites {:?} must be non-empty and within [1, {l}]", spec.sites),
        ));
    }
    let m = model.local_dim();
    match spec.kind {
        ImpurityKind::Flip if m == 2 => Ok(spec
            .sites
            .iter()
            .map(|&s| GateRule::pairs(vec![s - 1], 2, &[(vec![0], vec![1])], 0.5))
            .collect()),
        ImpurityKind::Swap if model == ModelId::DipHalfW4W5 => {
            let s = spec.sites[0];
            let t = if spec.sites.len() > 1 { spec.sites[1] } else { s + 1 };
            if t != s + 1 || t > l || spec.sites.len() > 2 {
                return Err(crate::error::validation("impurity.sites", "swap needs two neighbouring sites"));
            }
            Ok(vec![GateRule::pairs(vec![s - 1, t - 1], 2, &[(vec![1, 0], vec![0, 1])], 0.5)])
        }
        ImpurityKind::Resample if m == 3 => Ok(spec.sites.iter().map(|&s| GateRule::resample(s - 1)).collect()),
        _ => Err(unsupported()),
    }
}

/// Builds the layered update rule of `model` on `l` sites.
///
/// A gate family of span s yields s layers (offsets 0..s, stride s); empty
/// layers are dropped.  All impurity rules form one extra layer.  Every
/// layer is drawn with equal probability.
pub fn build_gate_set(model: ModelId, l: usize, impurity: Option<&ImpuritySpec>) -> Result<GateSet> {
    let span_need = model.min_span();
    if l < span_need {
        return Err(Error::SpanError { l, span: span_need });
    }
    let m = model.local_dim();
    let mut layers = Vec::new();
    for (offsets, pairs) in bulk_families(model) {
        let span = offsets.iter().max().unwrap() + 1;
        for off in 0..span {
            let mut layer = Vec::new();
            let mut i = off;
            while i + span <= l {
                let support = offsets.iter().map(|o| i + o).collect();
                layer.push(GateRule::pairs(support, m, &pairs, 0.5));
                i += span;
            }
            if !layer.is_empty() {
                layers.push(layer);
            }
        }
    }
    let impurity_rules = match impurity {
        Some(spec) => impurity_rules(model, l, spec)?,
        None => Vec::new(),
    };
    let choices = layers.len() + usize::from(!impurity_rules.is_empty());
    Ok(GateSet {
        model,
        l,
        bulk_layers: layers,
        impurity_rules,
        layer_weights: vec![1.0 / choices as f64; choices],
        impurity: impurity.cloned(),
    })
}

impl GateSet {
    pub fn local_dim(&self) -> usize {
        self.model.local_dim()
    }

    pub fn n_choices(&self) -> usize {
        self.layer_weights.len()
    }

    /// Rules of choice `k` (bulk layers first, then the impurity layer).
    pub fn layer(&self, k: usize) -> &[GateRule] {
        if k < self.bulk_layers.len() {
            &self.bulk_layers[k]
        } else {
            &self.impurity_rules
        }
    }

    pub fn all_rules(&self) -> impl Iterator<Item = &GateRule> {
        self.bulk_layers.iter().flatten().chain(self.impurity_rules.iter())
    }

    /// Checks the declared charges on every bulk pair.
    pub fn bulk_pairs_conserve(&self) -> bool {
        let m = self.local_dim();
        let decode = |idx: u16, s: usize| -> Vec<u8> {
            (0..s).map(|k| ((idx as usize / m.pow((s - 1 - k) as u32)) % m) as u8).collect()
        };
        self.bulk_layers.iter().flatten().all(|rule| match &rule.kind {
            RuleKind::Pairs { pairs, .. } => pairs.iter().all(|&(a, b)| {
                let (ca, cb) = (decode(a, rule.support.len()), decode(b, rule.support.len()));
                let q = |c: &[u8]| c.iter().map(|&x| self.model.charge(x)).sum::<i64>();
                let sz = |c: &[u8]| c.iter().map(|&x| self.model.observable(x) as i64).sum::<i64>();
                let dip = |c: &[u8]| {
                    c.iter()
                        .zip(&rule.support)
                        .map(|(&x, &j)| j as i64 * self.model.charge(x))
                        .sum::<i64>()
                };
                q(&ca) == q(&cb) && sz(&ca) == sz(&cb) && (!self.model.conserves_dipole() || dip(&ca) == dip(&cb))
            }),
            RuleKind::Resample => false,
        })
    }

    /// One CA time step in place: draw a layer, then fire every rule.
    pub fn step<R: Rng + ?Sized>(&self, config: &mut [u8], rng: &mut R) {
        let k = if self.n_choices() == 1 { 0 } else { rng.random_range(0..self.n_choices()) };
        let m = self.local_dim();
        let rules = self.layer(k);
        let mut bits = 0u64;
        let mut left = 0u32;
        for rule in rules {
            match &rule.kind {
                RuleKind::Pairs { table, flip_probability, .. } => {
                    let idx = rule.local_index(config, m);
                    let [first, second] = table[idx];
                    if first == NONE {
                        continue;
                    }
                    let target = if *flip_probability == 0.5 {
                        if left == 0 {
                            bits = rng.next_u64();
                            left = 64;
                        }
                        let b = bits & 1 == 1;
                        bits >>= 1;
                        left -= 1;
                        match (b, second) {
                            (true, _) => first,
                            (false, NONE) => NONE,
                            (false, s) => s,
                        }
                    } else {
                        let u = rng.random::<f64>();
                        if u < *flip_probability {
                            first
                        } else if u < 2.0 * flip_probability {
                            second
                        } else {
                            NONE
                        }
                    };
                    if target != NONE {
                        rule.write_local(config, m, target as usize);
                    }
                }
                RuleKind::Resample => {
                    config[rule.support[0]] = rng.random_range(0..m as u8);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_counts_and_weights() {
        let imp = ImpuritySpec::new(ImpurityKind::Flip, &[1]);
        let g = build_gate_set(ModelId::U1Half, 4, Some(&imp)).unwrap();
        assert_eq!(g.bulk_layers.len(), 2);
        assert_eq!(g.impurity_rules.len(), 1);
        assert!(g.layer_weights.iter().all(|&w| (w - 1.0 / 3.0).abs() < 1e-15));
        let g = build_gate_set(ModelId::U1Half, 4, None).unwrap();
        assert_eq!(g.layer_weights, vec![0.5, 0.5]);
        let g = build_gate_set(ModelId::DipOneH3, 3, None).unwrap();
        assert_eq!(g.bulk_layers.len(), 1);
        assert_eq!(g.bulk_layers[0].len(), 1);
        match &g.bulk_layers[0][0].kind {
            RuleKind::Pairs { pairs, .. } => assert_eq!(pairs.len(), 4),
            _ => unreachable!(),
        }
    }

    #[test]
    fn h4_has_sixteen_pairs() {
        assert_eq!(h4_pairs().len(), 16);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_gate_set(ModelId::DipHalfW4W5, 4, None), Err(Error::SpanError { .. })));
        let bad = ImpuritySpec::new(ImpurityKind::Resample, &[1]);
        assert!(matches!(
            build_gate_set(ModelId::U1Half, 4, Some(&bad)),
            Err(Error::UnsupportedImpurity { .. })
        ));
        let swap = ImpuritySpec::new(ImpurityKind::Swap, &[1, 2]);
        assert!(build_gate_set(ModelId::DipHalfW4W5, 8, Some(&swap)).is_ok());
        assert!(build_gate_set(ModelId::U1Half, 8, Some(&swap)).is_err());
    }

    #[test]
    fn bulk_rules_conserve_charges() {
        for model in ModelId::ALL {
            let g = build_gate_set(model, 9, None).unwrap();
            assert!(g.bulk_pairs_conserve(), "{model}");
        }
    }
}
