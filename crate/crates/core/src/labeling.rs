//! Labelings, edge weights, and the verifier that every constructor and
//! solver in this crate is tested against.
//!
//! The weight of an edge `uv` is `w(u) + w(v)`; a labeling is edge irregular
//! when all edge weights are pairwise distinct. The directed variant weighs
//! an arc `(u, v)` as `w(u) − w(v)`.

use crate::abelian::{AbelianGroup, GroupElement, GroupError};
use crate::graphs::{Digraph, Graph};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelingError {
    #[error("labeling covers {got} vertices, graph has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("cannot parse labeling: {0}")]
    Parse(String),
}

/// A vertex → group element assignment together with its group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    group: AbelianGroup,
    values: Vec<GroupElement>,
}

impl Labeling {
    pub fn new(group: AbelianGroup, values: Vec<GroupElement>) -> Result<Self, LabelingError> {
        for v in &values {
            if !group.contains(v) {
                return Err(GroupError::GroupMismatch.into());
            }
        }
        Ok(Labeling { group, values })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &GroupElement {
        &self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `{"group": "Z4xZ2", "values": [[r…], …]}`
    pub fn to_json(&self) -> String {
        let raw = LabelingJson {
            group: self.group.to_string(),
            values: self.values.iter().map(|e| e.residues().to_vec()).collect(),
        };
        serde_json::to_string(&raw).expect("labeling serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LabelingError> {
        let raw: LabelingJson =
            serde_json::from_str(text).map_err(|e| LabelingError::Parse(e.to_string()))?;
        let group: AbelianGroup = raw
            .group
            .parse()
            .map_err(|e: GroupError| LabelingError::Parse(e.to_string()))?;
        let values = raw
            .values
            .into_iter()
            .map(|rs| group.element(rs))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Labeling { group, values })
    }
}

#[derive(Serialize, Deserialize)]
struct LabelingJson {
    group: String,
    values: Vec<Vec<u64>>,
}

impl Serialize for Labeling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = LabelingJson {
            group: self.group.to_string(),
            values: self.values.iter().map(|e| e.residues().to_vec()).collect(),
        };
        raw.serialize(s)
    }
}

/// Per-edge weights in lexicographic edge order, with the distinctness flag
/// and, when weights collide, the first conflicting edge pair as a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    pub weights: Vec<((usize, usize), GroupElement)>,
    pub distinct: bool,
    pub duplicate: Option<((usize, usize), (usize, usize))>,
}

fn weigh<'a>(
    pairs: impl Iterator<Item = &'a (usize, usize)>,
    n: usize,
    labeling: &Labeling,
    subtract: bool,
) -> Result<WeightTable, LabelingError> {
    if labeling.len() != n {
        return Err(LabelingError::LengthMismatch { expected: n, got: labeling.len() });
    }
    let grp = labeling.group();
    let mut weights = Vec::new();
    let mut seen: HashMap<GroupElement, (usize, usize)> = HashMap::new();
    let mut duplicate = None;
    for &(u, v) in pairs {
        let w = if subtract {
            grp.sub(labeling.value(u), labeling.value(v))?
        } else {
            grp.add(labeling.value(u), labeling.value(v))?
        };
        if duplicate.is_none() {
            if let Some(&earlier) = seen.get(&w) {
                duplicate = Some((earlier, (u, v)));
            } else {
                seen.insert(w.clone(), (u, v));
            }
        }
        weights.push(((u, v), w));
    }
    Ok(WeightTable { distinct: duplicate.is_none(), duplicate, weights })
}

/// Weights `w(u) + w(v)` for every edge, lexicographic edge order.
pub fn edge_weights(g: &Graph, labeling: &Labeling) -> Result<WeightTable, LabelingError> {
    weigh(g.edges().iter(), g.n(), labeling, false)
}

/// Weights `w(tail) − w(head)` for every arc, lexicographic arc order.
pub fn arc_weights(d: &Digraph, labeling: &Labeling) -> Result<WeightTable, LabelingError> {
    weigh(d.arcs().iter(), d.n(), labeling, true)
}

/// Truth value plus a conflicting edge pair when false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrregularityVerdict {
    pub irregular: bool,
    pub conflict: Option<((usize, usize), (usize, usize))>,
}

pub fn is_edge_irregular(g: &Graph, labeling: &Labeling) -> Result<IrregularityVerdict, LabelingError> {
    let t = edge_weights(g, labeling)?;
    Ok(IrregularityVerdict { irregular: t.distinct, conflict: t.duplicate })
}

pub fn is_arc_irregular(d: &Digraph, labeling: &Labeling) -> Result<IrregularityVerdict, LabelingError> {
    let t = arc_weights(d, labeling)?;
    Ok(IrregularityVerdict { irregular: t.distinct, conflict: t.duplicate })
}

/// Truth value plus a duplicated vertex pair when false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityVerdict {
    pub injective: bool,
    pub duplicate: Option<(usize, usize)>,
}

pub fn is_injective(labeling: &Labeling) -> InjectivityVerdict {
    let mut seen: HashMap<&GroupElement, usize> = HashMap::new();
    for (v, e) in labeling.values().iter().enumerate() {
        if let Some(&u) = seen.get(e) {
            return InjectivityVerdict { injective: false, duplicate: Some((u, v)) };
        }
        seen.insert(e, v);
    }
    InjectivityVerdict { injective: true, duplicate: None }
}

/// Machine-readable verification report for one (graph, labeling) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub n: usize,
    pub m: usize,
    pub group: String,
    pub values: Vec<Vec<u64>>,
    pub weights: Vec<EdgeWeightJson>,
    pub distinct: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[[usize; 2]; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeWeightJson {
    pub edge: [usize; 2],
    pub weight: Vec<u64>,
}

impl VerificationReport {
    pub fn build(g: &Graph, labeling: &Labeling) -> Result<Self, LabelingError> {
        let t = edge_weights(g, labeling)?;
        Ok(Self::from_table(g, labeling, &t))
    }

    pub fn build_directed(d: &Digraph, labeling: &Labeling) -> Result<Self, LabelingError> {
        let t = arc_weights(d, labeling)?;
        Ok(VerificationReport {
            schema: 1,
            n: d.n(),
            m: d.m(),
            group: labeling.group().to_string(),
            values: labeling.values().iter().map(|e| e.residues().to_vec()).collect(),
            weights: t
                .weights
                .iter()
                .map(|((u, v), w)| EdgeWeightJson { edge: [*u, *v], weight: w.residues().to_vec() })
                .collect(),
            distinct: t.distinct,
            witness: t.duplicate.map(|((a, b), (c, d))| [[a, b], [c, d]]),
        })
    }

    fn from_table(g: &Graph, labeling: &Labeling, t: &WeightTable) -> Self {
        VerificationReport {
            schema: 1,
            n: g.n(),
            m: g.m(),
            group: labeling.group().to_string(),
            values: labeling.values().iter().map(|e| e.residues().to_vec()).collect(),
            weights: t
                .weights
                .iter()
                .map(|((u, v), w)| EdgeWeightJson { edge: [*u, *v], weight: w.residues().to_vec() })
                .collect(),
            distinct: t.distinct,
            witness: t.duplicate.map(|((a, b), (c, d))| [[a, b], [c, d]]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labeling(spec: &str, residues: &[&[u64]]) -> Labeling {
        let group: AbelianGroup = spec.parse().unwrap();
        let values = residues
            .iter()
            .map(|rs| group.element(rs.to_vec()).unwrap())
            .collect();
        Labeling::new(group, values).unwrap()
    }

    #[test]
    fn path_weights_distinct() {
        let g = Graph::path(3).unwrap();
        let l = labeling("Z2", &[&[0], &[0], &[1]]);
        let t = edge_weights(&g, &l).unwrap();
        let got: Vec<u64> = t.weights.iter().map(|(_, w)| w.residues()[0]).collect();
        assert_eq!(got, [0, 1]);
        assert!(t.distinct);
    }

    #[test]
    fn triangle_all_zero_has_witness() {
        let g = Graph::cycle(3).unwrap();
        let l = labeling("Z3", &[&[0], &[0], &[0]]);
        let t = edge_weights(&g, &l).unwrap();
        assert!(!t.distinct);
        assert_eq!(t.duplicate, Some(((0, 1), (0, 2))));
        let v = is_edge_irregular(&g, &l).unwrap();
        assert!(!v.irregular);
        assert!(v.conflict.is_some());
    }

    #[test]
    fn pigeonhole_forces_duplicates() {
        // m > |group| can never be irregular.
        let g = Graph::complete(4).unwrap(); // m = 6
        let grp: AbelianGroup = "Z5".parse().unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let l = Labeling::new(
                    grp.clone(),
                    vec![
                        grp.element(vec![a]).unwrap(),
                        grp.element(vec![b]).unwrap(),
                        grp.element(vec![(a + 2) % 5]).unwrap(),
                        grp.element(vec![(b + 3) % 5]).unwrap(),
                    ],
                )
                .unwrap();
                assert!(!is_edge_irregular(&g, &l).unwrap().irregular);
            }
        }
    }

    #[test]
    fn arc_weight_examples() {
        let d = Digraph::new(2, vec![(0, 1)]).unwrap();
        let l = labeling("Z5", &[&[1], &[1]]);
        let t = arc_weights(&d, &l).unwrap();
        assert_eq!(t.weights[0].1.residues(), [0]);

        let d = Digraph::new(3, vec![(0, 1), (0, 2)]).unwrap();
        let l = labeling("Z5", &[&[0], &[1], &[2]]);
        let t = arc_weights(&d, &l).unwrap();
        let got: Vec<u64> = t.weights.iter().map(|(_, w)| w.residues()[0]).collect();
        assert_eq!(got, [4, 3]);
        assert!(t.distinct);
    }

    #[test]
    fn injectivity() {
        let l = labeling("Z4", &[&[0], &[1], &[2]]);
        assert!(is_injective(&l).injective);
        let l = labeling("Z4", &[&[1], &[3], &[1]]);
        let v = is_injective(&l);
        assert!(!v.injective);
        assert_eq!(v.duplicate, Some((0, 2)));
    }

    #[test]
    fn length_mismatch_is_reported() {
        let g = Graph::path(3).unwrap();
        let l = labeling("Z3", &[&[0], &[1]]);
        assert!(matches!(
            edge_weights(&g, &l),
            Err(LabelingError::LengthMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn labeling_json_round_trip() {
        let l = labeling("Z4xZ2", &[&[0, 1], &[3, 0]]);
        let j = l.to_json();
        assert!(j.contains("\"group\":\"Z4xZ2\""));
        let back = Labeling::from_json(&j).unwrap();
        assert_eq!(back, l);
        assert!(Labeling::from_json("{\"group\":\"Z3\",\"values\":[[7]]}").is_err());
    }

    #[test]
    fn verification_report_shape() {
        let g = Graph::path(3).unwrap();
        let l = labeling("Z2", &[&[0], &[0], &[1]]);
        let r = VerificationReport::build(&g, &l).unwrap();
        assert!(r.distinct);
        assert_eq!(r.weights.len(), 2);
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("witness"));
    }
}
