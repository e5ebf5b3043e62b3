//! Toric arrangements: the layer poset, the face category of the compact
//! torus, local arrangements and the Grothendieck construction `∫D`.
//!
//! Points of the torus are written in angle coordinates: `t ∈ R^d / Z^d`
//! stands for `exp(2πi t)`. A hypertorus `{z^χ = exp(2πi a)}` is the set
//! `⟨χ, t⟩ ≡ a (mod 1)`.

mod faces;
mod functors;
mod layers;
mod salvetti;

pub use faces::{FaceCategory, FaceMorphism, TorusFace};
pub use functors::{induced_map, CategoryMap, InducedMap, Quotient, Subcategory};
pub use layers::{Layer, LayerPoset};
pub use salvetti::{Local, SalvettiCategory};

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hyperplane::{FacePoset, Hyperplane, HyperplaneArrangement};
use crate::lattice::{content, dot_q, frac, rank_q, to_q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypertorus {
    pub name: String,
    pub chi: Vec<BigInt>,
    /// Offset angle in `[0, 1)`.
    pub offset: Q,
}

impl Hypertorus {
    pub fn contains_point(&self, p: &[Q]) -> bool {
        (dot_q(&to_q(&self.chi), p) - &self.offset).is_integer()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricArrangement {
    pub dim: usize,
    pub hypertori: Vec<Hypertorus>,
    /// `ordering[r]` is the hypertorus of rank `r` in the total order.
    pub ordering: Vec<usize>,
    /// Optional names for layers, each given by a point the layer is the smallest one to contain.
    pub layer_names: Vec<(String, Vec<Q>)>,
}

impl ToricArrangement {
    pub fn new(dim: usize, hypertori: Vec<Hypertorus>, ordering: Option<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("dimension must be positive".into()));
        }
        let mut hs = hypertori;
        for h in hs.iter_mut() {
            if h.chi.len() != dim {
                return Err(Error::Input(format!("character of {} has length {}, expected {dim}", h.name, h.chi.len())));
            }
            if !content(&h.chi).is_one() {
                return Err(Error::Input(format!(
                    "character of {} is not primitive; split the hypertorus into its connected components",
                    h.name
                )));
            }
            h.offset = frac(&h.offset);
        }
        for i in 0..hs.len() {
            for j in 0..i {
                if hs[i].name == hs[j].name {
                    return Err(Error::Input(format!("duplicate hypertorus name {}", hs[i].name)));
                }
                let same = hs[i].chi == hs[j].chi && hs[i].offset == hs[j].offset;
                let neg: Vec<BigInt> = hs[j].chi.iter().map(|x| -x).collect();
                let opposite = hs[i].chi == neg && frac(&(&hs[i].offset + &hs[j].offset)).is_zero();
                if same || opposite {
                    return Err(Error::Input(format!("hypertori {} and {} coincide", hs[j].name, hs[i].name)));
                }
            }
        }
        let rows: Vec<Vec<Q>> = hs.iter().map(|h| to_q(&h.chi)).collect();
        if rank_q(&rows, dim) != dim {
            return Err(Error::Input("arrangement is not essential: the characters do not span rank d".into()));
        }
        let ordering = match ordering {
            Some(o) => {
                let mut sorted = o.clone();
                sorted.sort_unstable();
                if sorted != (0..hs.len()).collect::<Vec<_>>() {
                    return Err(Error::Input("ordering must list every hypertorus exactly once".into()));
                }
                o
            }
            None => (0..hs.len()).collect(),
        };
        Ok(ToricArrangement { dim, hypertori: hs, ordering, layer_names: Vec::new() })
    }

    pub fn len(&self) -> usize {
        self.hypertori.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypertori.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.hypertori.iter().position(|h| h.name == name)
    }

    /// Hypertori through `p`, by index.
    pub fn through(&self, p: &[Q]) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.hypertori[i].contains_point(p)).collect()
    }

    /// Rank of each hypertorus in the total order.
    pub fn rank_in_order(&self) -> Vec<usize> {
        let mut r = vec![0; self.len()];
        for (k, &h) in self.ordering.iter().enumerate() {
            r[h] = k;
        }
        r
    }

    /// The subarrangement on the given hypertori, keeping names and relative order.
    pub fn sub(&self, keep: &[usize]) -> Result<ToricArrangement> {
        let hs = keep.iter().map(|&i| self.hypertori[i].clone()).collect();
        let rank = self.rank_in_order();
        let mut ord: Vec<usize> = (0..keep.len()).collect();
        ord.sort_by_key(|&k| rank[keep[k]]);
        let mut a = ToricArrangement::new(self.dim, hs, Some(ord))?;
        a.layer_names = self.layer_names.clone();
        Ok(a)
    }
}

/// The linear arrangement `A_0` together with the map from hypertori to it.
#[derive(Clone, Debug)]
pub struct LinearModel {
    pub arrangement: HyperplaneArrangement,
    pub faces: FacePoset,
    /// Hyperplane of `A_0` for each hypertorus.
    pub of_hypertorus: Vec<usize>,
    /// `χ_i = orientation[i] · n_{of_hypertorus[i]}`.
    pub orientation: Vec<i8>,
    /// Integer normal of each hyperplane of `A_0`.
    pub normals: Vec<Vec<BigInt>>,
}

impl LinearModel {
    pub fn new(arr: &ToricArrangement) -> Result<Self> {
        let mut normals: Vec<Vec<BigInt>> = Vec::new();
        let mut of = Vec::new();
        let mut orient = Vec::new();
        for h in &arr.hypertori {
            let neg: Vec<BigInt> = h.chi.iter().map(|x| -x).collect();
            if let Some(k) = normals.iter().position(|n| n == &h.chi) {
                of.push(k);
                orient.push(1);
            } else if let Some(k) = normals.iter().position(|n| n == &neg) {
                of.push(k);
                orient.push(-1);
            } else {
                normals.push(h.chi.clone());
                of.push(normals.len() - 1);
                orient.push(1);
            }
        }
        let arrangement =
            HyperplaneArrangement::new(arr.dim, normals.iter().map(|n| Hyperplane::linear(to_q(n))).collect())?;
        let faces = FacePoset::new(&arrangement);
        Ok(LinearModel { arrangement, faces, of_hypertorus: of, orientation: orient, normals })
    }

    /// Zero set in `A_0` of the flat cut out by the given hypertori.
    pub fn flat_of(&self, hypertori: &[usize]) -> Vec<usize> {
        let d = self.arrangement.dim;
        let rows: Vec<Vec<Q>> = hypertori.iter().map(|&i| to_q(&self.normals[self.of_hypertorus[i]])).collect();
        let r = rank_q(&rows, d);
        (0..self.normals.len())
            .filter(|&a| {
                let mut rr = rows.clone();
                rr.push(to_q(&self.normals[a]));
                rank_q(&rr, d) == r
            })
            .collect()
    }
}

/// Everything computed from one arrangement, shared read-only downstream.
#[derive(Debug)]
pub struct ToricModel {
    pub arrangement: ToricArrangement,
    pub linear: LinearModel,
    pub layers: LayerPoset,
    pub faces: FaceCategory,
    pub salvetti: SalvettiCategory,
    pub locals: HashMap<Vec<usize>, Arc<Local>>,
}

impl ToricModel {
    pub fn new(arr: ToricArrangement) -> Result<Self> {
        let linear = LinearModel::new(&arr)?;
        let layers = LayerPoset::new(&arr)?;
        let faces = FaceCategory::new(&arr, &linear, &layers)?;
        let mut locals: HashMap<Vec<usize>, Arc<Local>> = HashMap::new();
        for f in &faces.faces {
            locals.entry(f.local.clone()).or_insert_with(|| Arc::new(Local::new(&linear, &f.local)));
        }
        let salvetti = SalvettiCategory::new(&faces, &locals)?;
        Ok(ToricModel { arrangement: arr, linear, layers, faces, salvetti, locals })
    }

    pub fn local(&self, face: usize) -> &Local {
        &self.locals[&self.faces.faces[face].local]
    }

    /// Zero set in `A_0` of `X_L`.
    pub fn x_layer(&self, l: usize) -> Vec<usize> {
        self.linear.flat_of(&self.layers.layers[l].hypertori)
    }

    /// `X_L^F` as positions in the local arrangement `A[F]`.
    pub fn x_layer_at(&self, l: usize, face: usize) -> Vec<usize> {
        let x = self.x_layer(l);
        let local = &self.faces.faces[face].local;
        (0..local.len()).filter(|&p| x.contains(&local[p])).collect()
    }

    /// Torus faces contained in the layer.
    pub fn faces_in_layer(&self, l: usize) -> Vec<usize> {
        let layer = &self.layers.layers[l];
        (0..self.faces.faces.len()).filter(|&f| layer.contains_point(&self.faces.faces[f].barycenter)).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lattice::{q, qi};

    pub fn ht(name: &str, chi: &[i64], num: i64, den: i64) -> Hypertorus {
        Hypertorus { name: name.into(), chi: chi.iter().map(|&x| BigInt::from(x)).collect(), offset: q(num, den) }
    }

    /// z0 = 1, z0 z1² = 1, z1 = 1, with names P and Q for the two points.
    pub fn example() -> ToricArrangement {
        let mut a = ToricArrangement::new(
            2,
            vec![ht("H0", &[1, 0], 0, 1), ht("H1", &[1, 2], 0, 1), ht("H2", &[0, 1], 0, 1)],
            Some(vec![2, 0, 1]),
        )
        .unwrap();
        a.layer_names = vec![("P".into(), vec![qi(0), qi(0)]), ("Q".into(), vec![qi(0), q(1, 2)])];
        a
    }

    #[test]
    fn validation() {
        assert!(ToricArrangement::new(2, vec![ht("A", &[2, 0], 0, 1), ht("B", &[0, 1], 0, 1)], None).is_err());
        assert!(ToricArrangement::new(2, vec![ht("A", &[1, 0], 0, 1)], None).is_err());
        assert!(ToricArrangement::new(1, vec![ht("A", &[1], 1, 3), ht("B", &[-1], 2, 3)], None).is_err());
        assert!(ToricArrangement::new(1, vec![ht("A", &[1], 1, 3), ht("B", &[-1], 1, 3)], None).is_ok());
        assert!(ToricArrangement::new(1, vec![ht("A", &[1], 0, 1)], Some(vec![1])).is_err());
    }

    #[test]
    fn linear_model_of_example() {
        let lm = LinearModel::new(&example()).unwrap();
        assert_eq!(lm.arrangement.len(), 3);
        assert_eq!(lm.faces.len(), 13);
        assert_eq!(lm.flat_of(&[0, 1]), vec![0, 1, 2]);
        assert_eq!(lm.flat_of(&[0]), vec![0]);
        assert!(lm.flat_of(&[]).is_empty());
    }

    #[test]
    fn parallel_hypertori_share_a_hyperplane() {
        let a = ToricArrangement::new(1, vec![ht("A", &[1], 0, 1), ht("B", &[-1], 1, 3)], None).unwrap();
        let lm = LinearModel::new(&a).unwrap();
        assert_eq!(lm.of_hypertorus, vec![0, 0]);
        assert_eq!(lm.orientation, vec![1, -1]);
    }
}
