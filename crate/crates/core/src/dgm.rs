//! Data-generation mechanisms: which areal units end up "observed".
//!
//! * D1: uniform sampling without replacement.
//! * D2: successive weighted sampling, members of a cluster region carry
//!   `weight_ratio` times the weight of other units.
//! * D3: repeatedly pick an unobserved seed unit uniformly and observe it
//!   together with its neighbours, stopping exactly at N.

use std::collections::BTreeSet;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::areal::ArealStructure;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSizeRule {
    /// N = floor(n_a / 10)
    Tenth,
    /// N = floor(n_a / 4)
    Quarter,
}

impl SampleSizeRule {
    pub fn label(&self) -> &'static str {
        match self {
            SampleSizeRule::Tenth => "tenth",
            SampleSizeRule::Quarter => "quarter",
        }
    }
}

pub fn sample_size(n_a: usize, rule: SampleSizeRule) -> Result<usize> {
    let n = match rule {
        SampleSizeRule::Tenth => n_a / 10,
        SampleSizeRule::Quarter => n_a / 4,
    };
    if n < 2 {
        return Err(Error::InsufficientSample(n));
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dgm {
    D1,
    D2,
    D3,
}

impl Dgm {
    pub fn label(&self) -> &'static str {
        match self {
            Dgm::D1 => "d1",
            Dgm::D2 => "d2",
            Dgm::D3 => "d3",
        }
    }
}

/// Units sampled with elevated probability under D2.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRegionSpec {
    members: BTreeSet<usize>,
    weight_ratio: f64,
}

pub const DEFAULT_WEIGHT_RATIO: f64 = 10.0;

impl ClusterRegionSpec {
    pub fn new<S: AsRef<str>>(
        structure: &ArealStructure,
        member_ids: &[S],
        weight_ratio: f64,
    ) -> Result<Self> {
        if member_ids.is_empty() {
            return Err(Error::Domain("cluster region has no members".into()));
        }
        if !(weight_ratio >= 1.0) || !weight_ratio.is_finite() {
            return Err(Error::Domain(format!(
                "cluster weight ratio must be finite and >= 1, got {weight_ratio}"
            )));
        }
        let members = member_ids
            .iter()
            .map(|id| {
                structure
                    .index_of(id.as_ref())
                    .ok_or_else(|| Error::Domain(format!("cluster member `{}` is not a unit", id.as_ref())))
            })
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(ClusterRegionSpec {
            members,
            weight_ratio,
        })
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn weight_ratio(&self) -> f64 {
        self.weight_ratio
    }
}

/// A set of observed units, in selection order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Draw {
    pub indices: Vec<usize>,
    pub seed: u64,
}

impl Draw {
    pub fn ids<'a>(&self, structure: &'a ArealStructure) -> Vec<&'a str> {
        self.indices.iter().map(|&i| structure.units()[i].id()).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

fn check_n(structure: &ArealStructure, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InsufficientSample(n));
    }
    if n > structure.n_units() {
        return Err(Error::Domain(format!(
            "cannot observe {n} units out of {}",
            structure.n_units()
        )));
    }
    Ok(())
}

pub fn sample_d1(structure: &ArealStructure, n: usize, seed: u64) -> Result<Draw> {
    check_n(structure, n)?;
    let mut rng = rng_from_seed(seed);
    let indices = rand::seq::index::sample(&mut rng, structure.n_units(), n).into_vec();
    Ok(Draw { indices, seed })
}

pub fn sample_d2(
    structure: &ArealStructure,
    n: usize,
    region: &ClusterRegionSpec,
    seed: u64,
) -> Result<Draw> {
    check_n(structure, n)?;
    let mut rng = rng_from_seed(seed);
    let mut weights: Vec<f64> = (0..structure.n_units())
        .map(|i| {
            if region.members.contains(&i) {
                region.weight_ratio
            } else {
                1.0
            }
        })
        .collect();
    let mut indices = Vec::with_capacity(n);
    for _ in 0..n {
        let total: f64 = weights.iter().sum();
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        // fall back to the last positive weight if rounding overshoots
        let mut pick = weights.iter().rposition(|&w| w > 0.0).expect("units remain");
        for (i, &w) in weights.iter().enumerate() {
            acc += w;
            if w > 0.0 && target < acc {
                pick = i;
                break;
            }
        }
        weights[pick] = 0.0;
        indices.push(pick);
    }
    Ok(Draw { indices, seed })
}

pub fn sample_d3(structure: &ArealStructure, n: usize, seed: u64) -> Result<Draw> {
    check_n(structure, n)?;
    let mut rng = rng_from_seed(seed);
    let mut observed = vec![false; structure.n_units()];
    let mut remaining: Vec<usize> = (0..structure.n_units()).collect();
    let mut indices = Vec::with_capacity(n);
    let observe = |i: usize, observed: &mut [bool], indices: &mut Vec<usize>| {
        if !observed[i] && indices.len() < n {
            observed[i] = true;
            indices.push(i);
        }
    };
    while indices.len() < n {
        remaining.retain(|&i| !observed[i]);
        let seed_unit = remaining[rng.random_range(0..remaining.len())];
        observe(seed_unit, &mut observed, &mut indices);
        for &j in structure.neighbors(seed_unit) {
            observe(j, &mut observed, &mut indices);
        }
    }
    Ok(Draw { indices, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::areal::build_grid;
    use crate::rng::{derive_seed, STREAM_REPLICATE};

    #[test]
    fn sample_size_examples() {
        assert_eq!(sample_size(400, SampleSizeRule::Tenth).unwrap(), 40);
        assert_eq!(sample_size(400, SampleSizeRule::Quarter).unwrap(), 100);
        assert_eq!(sample_size(549, SampleSizeRule::Quarter).unwrap(), 137);
        assert_eq!(sample_size(549, SampleSizeRule::Tenth).unwrap(), 54);
        assert_eq!(sample_size(267, SampleSizeRule::Tenth).unwrap(), 26);
        assert_eq!(sample_size(267, SampleSizeRule::Quarter).unwrap(), 66);
        assert!(matches!(
            sample_size(19, SampleSizeRule::Tenth),
            Err(Error::InsufficientSample(1))
        ));
    }

    fn distinct(d: &Draw) -> bool {
        let s: BTreeSet<_> = d.indices.iter().collect();
        s.len() == d.indices.len()
    }

    #[test]
    fn exhaustive_and_forced_draws() {
        let g = build_grid(4, 5, 1.0).unwrap();
        let all: BTreeSet<usize> = (0..20).collect();
        for d in [sample_d1(&g, 20, 3).unwrap(), sample_d3(&g, 20, 3).unwrap()] {
            assert_eq!(d.indices.iter().copied().collect::<BTreeSet<_>>(), all);
        }
        let two = build_grid(1, 2, 1.0).unwrap();
        let d = sample_d1(&two, 2, 9).unwrap();
        assert_eq!(
            d.indices.iter().copied().collect::<BTreeSet<_>>(),
            BTreeSet::from([0, 1])
        );
        assert!(sample_d1(&two, 3, 9).is_err());
        assert!(sample_d1(&two, 1, 9).is_err());
    }

    #[test]
    fn draws_are_reproducible_and_distinct() {
        let g = build_grid(20, 20, 1.0).unwrap();
        let cluster = ClusterRegionSpec::new(&g, &["r0c0", "r0c1", "r1c0"], 10.0).unwrap();
        for seed in 0..20 {
            let a = sample_d1(&g, 40, seed).unwrap();
            assert_eq!(a, sample_d1(&g, 40, seed).unwrap());
            let b = sample_d2(&g, 40, &cluster, seed).unwrap();
            assert_eq!(b, sample_d2(&g, 40, &cluster, seed).unwrap());
            let c = sample_d3(&g, 100, seed).unwrap();
            assert_eq!(c, sample_d3(&g, 100, seed).unwrap());
            for d in [&a, &b, &c] {
                assert!(distinct(d));
            }
            assert_eq!((a.len(), b.len(), c.len()), (40, 40, 100));
        }
    }

    #[test]
    fn d1_inclusion_frequency() {
        // inclusion probability N/n_a = 0.1; 3 binomial SEs over 1e5 draws
        let g = build_grid(20, 20, 1.0).unwrap();
        let draws = 100_000u64;
        let mut hits = vec![0u32; 400];
        for k in 0..draws {
            for i in sample_d1(&g, 40, derive_seed(11, STREAM_REPLICATE, k))
                .unwrap()
                .indices
            {
                hits[i] += 1;
            }
        }
        let se = (0.1f64 * 0.9 / draws as f64).sqrt();
        // 400 simultaneous checks: allow 4.5 SE to keep the family-wise
        // false-alarm rate small
        for h in hits {
            let f = h as f64 / draws as f64;
            assert!((f - 0.1).abs() < 4.5 * se, "frequency {f}");
        }
    }

    #[test]
    fn d2_first_draw_probability() {
        // three units {a,b,c}, region {a}, ratio 10: P(a first) = 10/12
        let doc = r#"{"type":"FeatureCollection","features":[
          {"type":"Feature","properties":{"id":"a"},"geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1]]]}},
          {"type":"Feature","properties":{"id":"b"},"geometry":{"type":"Polygon","coordinates":[[[1,0],[2,0],[2,1],[1,1]]]}},
          {"type":"Feature","properties":{"id":"c"},"geometry":{"type":"Polygon","coordinates":[[[2,0],[3,0],[3,1],[2,1]]]}}]}"#;
        let s = crate::areal::load_structure(doc, Default::default()).unwrap();
        let region = ClusterRegionSpec::new(&s, &["a"], 10.0).unwrap();
        let trials = 60_000u64;
        let a = s.index_of("a").unwrap();
        let hits = (0..trials)
            .filter(|&k| sample_d2(&s, 2, &region, derive_seed(5, 0, k)).unwrap().indices[0] == a)
            .count();
        let p = 10.0 / 12.0;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits as f64 / trials as f64 - p).abs() < 4.0 * se);
    }

    #[test]
    fn d2_huge_ratio_selects_only_members() {
        let g = build_grid(6, 6, 1.0).unwrap();
        let ids: Vec<String> = (0..3)
            .flat_map(|r| (0..3).map(move |c| format!("r{r}c{c}")))
            .collect();
        let region = ClusterRegionSpec::new(&g, &ids, 1e9).unwrap();
        for seed in 0..50 {
            let d = sample_d2(&g, 9, &region, seed).unwrap();
            assert!(d.indices.iter().all(|i| region.members().contains(i)));
        }
    }

    #[test]
    fn d2_with_unit_ratio_matches_d1_marginals() {
        let g = build_grid(3, 3, 1.0).unwrap();
        let region = ClusterRegionSpec::new(&g, &["r0c0"], 1.0).unwrap();
        let trials = 30_000u64;
        let mut hits = [0u32; 9];
        for k in 0..trials {
            for i in sample_d2(&g, 3, &region, derive_seed(1, 2, k)).unwrap().indices {
                hits[i] += 1;
            }
        }
        let p = 1.0 / 3.0;
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        for h in hits {
            assert!((h as f64 / trials as f64 - p).abs() < 4.0 * se);
        }
    }

    #[test]
    fn cluster_spec_validation() {
        let g = build_grid(2, 2, 1.0).unwrap();
        assert!(ClusterRegionSpec::new::<&str>(&g, &[], 10.0).is_err());
        assert!(ClusterRegionSpec::new(&g, &["nope"], 10.0).is_err());
        assert!(ClusterRegionSpec::new(&g, &["r0c0"], 0.5).is_err());
    }

    #[test]
    fn d3_plus_shaped_cluster_and_truncation() {
        let g = build_grid(20, 20, 1.0).unwrap();
        // find seeds whose first pick is an interior cell
        for seed in 0..200 {
            let d5 = sample_d3(&g, 5, seed).unwrap();
            let first = d5.indices[0];
            let (r, c) = (first / 20, first % 20);
            if r == 0 || r == 19 || c == 0 || c == 19 {
                continue;
            }
            let mut expected = vec![first];
            expected.extend_from_slice(g.neighbors(first));
            assert_eq!(d5.indices, expected);
            let d3 = sample_d3(&g, 3, seed).unwrap();
            assert_eq!(d3.indices, expected[..3]);
            return;
        }
        panic!("no interior seed found");
    }

    #[test]
    fn d3_component_bound() {
        // components of the induced subgraph <= ceil(N / (1 + min degree))
        // holds comfortably for plus-shaped clusters on the grid interior
        let g = build_grid(20, 20, 1.0).unwrap();
        for seed in 0..100 {
            let d = sample_d3(&g, 40, seed).unwrap();
            let inset: BTreeSet<usize> = d.indices.iter().copied().collect();
            let mut seen = BTreeSet::new();
            let mut comps = 0;
            for &s in &d.indices {
                if !seen.insert(s) {
                    continue;
                }
                comps += 1;
                let mut stack = vec![s];
                while let Some(u) = stack.pop() {
                    for &v in g.neighbors(u) {
                        if inset.contains(&v) && seen.insert(v) {
                            stack.push(v);
                        }
                    }
                }
            }
            // min degree on the grid is 2 (corners)
            assert!(comps <= 40usize.div_ceil(3), "{comps} components");
        }
    }
}
