use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::ToricArrangement;
use crate::error::{Error, Result};
use crate::lattice::{dot_q, frac, quotient_group, smith_normal_form, to_q, IntMatrix, Q};

/// A connected component of an intersection of hypertori.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub name: String,
    /// `A_L`: every hypertorus containing the layer, by index.
    pub hypertori: Vec<usize>,
    pub rank: usize,
    /// A point of the layer in `[0,1)^d`, canonical for the layer.
    pub base: Vec<Q>,
    /// Integer basis of the saturated direction lattice.
    pub direction: Vec<Vec<BigInt>>,
    /// Basis of the saturation of the lattice spanned by the characters of `A_L`.
    ///
    /// `p` lies on the layer iff `⟨w, p − base⟩ ∈ Z` for each row `w`.
    pub characters: Vec<Vec<BigInt>>,
}

impl Layer {
    fn from_component(arr: &ToricArrangement, hypertori: Vec<usize>, point: &[Q]) -> Layer {
        let d = arr.dim;
        let g = IntMatrix::from_rows_with_cols(
            &hypertori.iter().map(|&i| arr.hypertori[i].chi.clone()).collect::<Vec<_>>(),
            d,
        );
        let snf = smith_normal_form(&g);
        let test: Vec<Vec<BigInt>> = (0..snf.rank).map(|j| snf.v_inv.row(j)).collect();
        // Canonical point: W-coordinates reduced mod 1, free coordinates zero.
        let mut s = vec![Q::zero(); d];
        for (j, w) in test.iter().enumerate() {
            s[j] = frac(&dot_q(&to_q(w), point));
        }
        let base: Vec<Q> = (0..d)
            .map(|i| frac(&(0..d).fold(Q::zero(), |acc, j| acc + Q::from_integer(snf.v[(i, j)].clone()) * &s[j])))
            .collect();
        let direction = (snf.rank..d).map(|j| snf.v.col(j)).collect();
        Layer { name: String::new(), hypertori, rank: snf.rank, base, direction, characters: test }
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn contains_point(&self, p: &[Q]) -> bool {
        let diff: Vec<Q> = p.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        self.characters.iter().all(|w| dot_q(&to_q(w), &diff).is_integer())
    }

    fn key(&self) -> (Vec<usize>, Vec<Q>) {
        (self.hypertori.clone(), self.base.clone())
    }
}

/// Components of `{t : ⟨χ_i, t⟩ ≡ a_i, i ∈ set}`, one point each.
fn components(arr: &ToricArrangement, set: &[usize]) -> Vec<Vec<Q>> {
    let d = arr.dim;
    let g = IntMatrix::from_rows_with_cols(&set.iter().map(|&i| arr.hypertori[i].chi.clone()).collect::<Vec<_>>(), d);
    let c: Vec<Q> = set.iter().map(|&i| arr.hypertori[i].offset.clone()).collect();
    let snf = smith_normal_form(&g);
    let uc: Vec<Q> = (0..set.len())
        .map(|i| (0..set.len()).fold(Q::zero(), |acc, j| acc + Q::from_integer(snf.u[(i, j)].clone()) * &c[j]))
        .collect();
    if uc[snf.rank..].iter().any(|x| !x.is_integer()) {
        return Vec::new();
    }
    let mut y = vec![Q::zero(); d];
    for j in 0..snf.rank {
        y[j] = &uc[j] / Q::from_integer(snf.d[(j, j)].clone());
    }
    let t0: Vec<Q> =
        (0..d).map(|i| (0..d).fold(Q::zero(), |acc, j| acc + Q::from_integer(snf.v[(i, j)].clone()) * &y[j])).collect();
    quotient_group(&g, d).elements.iter().map(|e| t0.iter().zip(e).map(|(a, b)| frac(&(a + b))).collect()).collect()
}

/// All layers, sorted by rank; rank-one layers follow the hypertorus order.
#[derive(Clone, Debug)]
pub struct LayerPoset {
    pub layers: Vec<Layer>,
}

impl LayerPoset {
    pub fn new(arr: &ToricArrangement) -> Result<Self> {
        let d = arr.dim;
        let make = |set: Vec<usize>, p: &[Q]| -> Layer {
            // Close up: every hypertorus containing the whole component.
            let dir_rows: Vec<Vec<Q>> = set.iter().map(|&i| to_q(&arr.hypertori[i].chi)).collect();
            let r = crate::lattice::rank_q(&dir_rows, d);
            let full: Vec<usize> = (0..arr.len())
                .filter(|&i| {
                    let mut rr = dir_rows.clone();
                    rr.push(to_q(&arr.hypertori[i].chi));
                    arr.hypertori[i].contains_point(p) && crate::lattice::rank_q(&rr, d) == r
                })
                .collect();
            Layer::from_component(arr, full, p)
        };
        let mut found: BTreeMap<(Vec<usize>, Vec<Q>), Layer> = BTreeMap::new();
        let torus = make(vec![], &vec![Q::zero(); d]);
        found.insert(torus.key(), torus);
        for i in 0..arr.len() {
            for p in components(arr, &[i]) {
                let l = make(vec![i], &p);
                found.insert(l.key(), l);
            }
        }
        loop {
            let current: Vec<Layer> = found.values().cloned().collect();
            let mut added = false;
            for a in 0..current.len() {
                for b in 0..a {
                    let (la, lb) = (&current[a], &current[b]);
                    let mut set: Vec<usize> = la.hypertori.iter().chain(&lb.hypertori).copied().collect();
                    set.sort_unstable();
                    set.dedup();
                    for p in components(arr, &set) {
                        if la.contains_point(&p) && lb.contains_point(&p) {
                            let l = make(set.clone(), &p);
                            if let std::collections::btree_map::Entry::Vacant(e) = found.entry(l.key()) {
                                e.insert(l);
                                added = true;
                            }
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        let rank = arr.rank_in_order();
        let mut layers: Vec<Layer> = found.into_values().collect();
        layers.sort_by(|x, y| {
            let kx: Vec<usize> = x.hypertori.iter().map(|&h| rank[h]).collect();
            let ky: Vec<usize> = y.hypertori.iter().map(|&h| rank[h]).collect();
            let (mut kx, mut ky) = (kx, ky);
            kx.sort_unstable();
            ky.sort_unstable();
            x.rank.cmp(&y.rank).then_with(|| kx.cmp(&ky)).then_with(|| x.base.cmp(&y.base))
        });
        if layers.iter().map(|l| l.rank).max() != Some(d) {
            return Err(Error::Input("arrangement is not essential".into()));
        }
        // Rank-one layers are the hypertori themselves; keep input names.
        let mut per_rank = vec![0usize; d + 1];
        for l in layers.iter_mut() {
            l.name = match l.rank {
                0 => "T".into(),
                1 if l.hypertori.len() == 1 => arr.hypertori[l.hypertori[0]].name.clone(),
                r => format!("L{r}_{}", per_rank[r]),
            };
            per_rank[l.rank] += 1;
        }
        let mut poset = LayerPoset { layers };
        for (name, p) in &arr.layer_names {
            let l = poset.layer_of_point(arr, p);
            poset.layers[l].name = name.clone();
        }
        let mut names: Vec<&str> = poset.layers.iter().map(|l| l.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("layer names are not unique".into()));
        }
        Ok(poset)
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn by_name(&self, name: &str) -> Option<usize> {
        self.layers.iter().position(|l| l.name == name)
    }

    /// `a ≤ b` in reverse inclusion, i.e. `b ⊆ a`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        let (la, lb) = (&self.layers[a], &self.layers[b]);
        la.hypertori.iter().all(|h| lb.hypertori.contains(h)) && la.contains_point(&lb.base)
    }

    /// The smallest layer containing `p`.
    pub fn layer_of_point(&self, arr: &ToricArrangement, p: &[Q]) -> usize {
        let through = arr.through(p);
        self.layers
            .iter()
            .position(|l| l.hypertori == through && l.contains_point(p))
            .expect("the layers are closed under intersection")
    }

    pub fn of_rank(&self, r: usize) -> Vec<usize> {
        (0..self.len()).filter(|&l| self.layers[l].rank == r).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{q, qi};
    use crate::toric::tests::{example, ht};

    #[test]
    fn example_layers() {
        let arr = example();
        let lp = LayerPoset::new(&arr).unwrap();
        let names: Vec<&str> = lp.layers.iter().map(|l| l.name.as_str()).collect();
        let ranks: Vec<usize> = lp.layers.iter().map(|l| l.rank).collect();
        // H2 comes first in the total order.
        assert_eq!(names, vec!["T", "H2", "H0", "H1", "P", "Q"]);
        assert_eq!(ranks, vec![0, 1, 1, 1, 2, 2]);
        let p = lp.by_name("P").unwrap();
        let qq = lp.by_name("Q").unwrap();
        assert_eq!(lp.layers[p].base, vec![qi(0), qi(0)]);
        assert_eq!(lp.layers[qq].base, vec![qi(0), q(1, 2)]);
        assert_eq!(lp.layers[p].hypertori, vec![0, 1, 2]);
        assert_eq!(lp.layers[qq].hypertori, vec![0, 1]);
        let h0 = lp.by_name("H0").unwrap();
        assert!(lp.leq(0, p) && lp.leq(h0, p) && lp.leq(h0, qq));
        assert!(!lp.leq(lp.by_name("H2").unwrap(), qq));
        assert!(!lp.leq(p, h0));
    }

    #[test]
    fn intersection_components_by_congruences() {
        // H0 ∩ H1 solved directly: t0 ≡ 0, t0 + 2 t1 ≡ 0 has solutions t1 ∈ {0, 1/2}.
        let arr = example();
        let mut pts = components(&arr, &[0, 1]);
        pts.sort();
        assert_eq!(pts, vec![vec![qi(0), qi(0)], vec![qi(0), q(1, 2)]]);
    }

    #[test]
    fn single_hypertorus_in_dimension_one() {
        let arr = ToricArrangement::new(1, vec![ht("z", &[1], 0, 1)], None).unwrap();
        let lp = LayerPoset::new(&arr).unwrap();
        assert_eq!(lp.len(), 2);
    }

    #[test]
    fn offsets_move_points() {
        let arr = ToricArrangement::new(1, vec![ht("z", &[1], 1, 3), ht("w", &[1], 2, 3)], None).unwrap();
        let lp = LayerPoset::new(&arr).unwrap();
        let bases: Vec<Vec<Q>> = lp.layers.iter().skip(1).map(|l| l.base.clone()).collect();
        assert_eq!(bases, vec![vec![q(1, 3)], vec![q(2, 3)]]);
    }
}
