use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{LayerPoset, LinearModel, ToricArrangement};
use crate::category::AcyclicCategory;
use crate::error::{Error, Result};
use crate::hyperplane::{face_leq, sign_of, FacePoset, Hyperplane, HyperplaneArrangement, SignVector};
use crate::lattice::{dot_q, frac, to_q, Q};

/// Window half-widths tried before giving up.
const MAX_WINDOW: i64 = 64;

/// A cell of the compact torus, represented by the lift whose vertex
/// barycenter lies in `[0,1)^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusFace {
    pub dim: usize,
    pub barycenter: Vec<Q>,
    pub support: usize,
    /// `A[F]` as sorted indices into `A_0`.
    pub local: Vec<usize>,
    /// Hypertori containing the face.
    pub hypertori: Vec<usize>,
}

/// `F → G`: the lift `G + shift` has the lift of `F` in its closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMorphism {
    pub src: usize,
    pub tgt: usize,
    pub shift: Vec<BigInt>,
    /// Sign vector on `A[src]` of the face `F_m`.
    pub fm: SignVector,
}

#[derive(Clone, Debug)]
pub struct FaceCategory {
    pub faces: Vec<TorusFace>,
    /// All morphisms, identities included; sorted by source, target, shift.
    pub morphisms: Vec<FaceMorphism>,
    pub identity: Vec<usize>,
    /// Half-width `w` of the window `[-w, 1+w]^d` that sufficed.
    pub window: i64,
    index: HashMap<(usize, usize, Vec<BigInt>), usize>,
}

struct Lift {
    arrangement: HyperplaneArrangement,
    /// Hypertorus of each lifted hyperplane.
    hypertorus: Vec<usize>,
}

fn lift(arr: &ToricArrangement, w: i64) -> Result<Lift> {
    let (lo, hi) = (BigInt::from(-w), BigInt::from(1 + w));
    let mut hps = Vec::new();
    let mut of = Vec::new();
    for (i, h) in arr.hypertori.iter().enumerate() {
        let (mut min, mut max) = (BigInt::zero(), BigInt::zero());
        for c in &h.chi {
            let (a, b) = (c * &lo, c * &hi);
            if a < b {
                min += a;
                max += b;
            } else {
                min += b;
                max += a;
            }
        }
        let kmin = (Q::from_integer(min) - &h.offset).ceil().to_integer();
        let kmax = (Q::from_integer(max) - &h.offset).floor().to_integer();
        let mut k = kmin;
        while k <= kmax {
            hps.push(Hyperplane { normal: to_q(&h.chi), offset: &h.offset + Q::from_integer(k.clone()) });
            of.push(i);
            k += 1;
        }
    }
    Ok(Lift { arrangement: HyperplaneArrangement::new(arr.dim, hps)?, hypertorus: of })
}

impl FaceCategory {
    pub fn new(arr: &ToricArrangement, linear: &LinearModel, layers: &LayerPoset) -> Result<Self> {
        let mut w = 1;
        while w <= MAX_WINDOW {
            if let Some(fc) = Self::try_window(arr, linear, layers, w)? {
                return Ok(fc);
            }
            w *= 2;
        }
        Err(Error::Check(format!("face enumeration did not close up within window {MAX_WINDOW}")))
    }

    fn try_window(arr: &ToricArrangement, linear: &LinearModel, layers: &LayerPoset, w: i64) -> Result<Option<Self>> {
        let d = arr.dim;
        let lifted = lift(arr, w)?;
        let fp = FacePoset::new(&lifted.arrangement);
        let n = fp.len();
        let vertices: Vec<usize> = (0..n).filter(|&f| fp.faces[f].dim == 0).collect();
        let (lo, hi) = (Q::from_integer((-w).into()), Q::from_integer((1 + w).into()));
        // Nonzero faces of A_0, for the recession-cone test.
        let rays: Vec<&SignVector> = linear.faces.faces.iter().filter(|f| f.dim > 0).map(|f| &f.sign).collect();
        let mut good = vec![false; n];
        let mut bary: Vec<Vec<Q>> = vec![Vec::new(); n];
        for f in 0..n {
            let s = fp.sign(f);
            let bounded = !rays.iter().any(|r| {
                s.iter().enumerate().all(|(j, &sj)| {
                    let i = lifted.hypertorus[j];
                    let rj = linear.orientation[i] * r[linear.of_hypertorus[i]];
                    if sj == 0 {
                        rj == 0
                    } else {
                        rj == 0 || rj == sj
                    }
                })
            });
            if !bounded {
                continue;
            }
            let vs: Vec<usize> = vertices.iter().copied().filter(|&v| face_leq(fp.sign(v), s)).collect();
            let inside = vs.iter().all(|&v| fp.faces[v].witness.iter().all(|x| x > &lo && x < &hi));
            if !inside || vs.is_empty() {
                continue;
            }
            let k = Q::from_integer(BigInt::from(vs.len()));
            bary[f] = (0..d)
                .map(|c| vs.iter().fold(Q::zero(), |acc, &v| acc + &fp.faces[v].witness[c]) / &k)
                .collect();
            good[f] = true;
        }
        let in_domain = |b: &[Q]| b.iter().all(|x| x >= &Q::zero() && x < &Q::one());
        let mut reps: Vec<usize> = (0..n).filter(|&f| good[f] && in_domain(&bary[f])).collect();
        let rep_of: HashMap<Vec<Q>, usize> = reps.iter().map(|&f| (bary[f].clone(), f)).collect();
        // Closure under faces and cofaces up to translation; with connectivity
        // this means every orbit has been found.
        let mut star: HashMap<usize, Vec<usize>> = HashMap::new();
        for &r in &reps {
            let mut cof = Vec::new();
            for g in 0..n {
                let up = face_leq(fp.sign(r), fp.sign(g));
                let down = face_leq(fp.sign(g), fp.sign(r));
                if !(up || down) {
                    continue;
                }
                if !good[g] {
                    return Ok(None);
                }
                let key: Vec<Q> = bary[g].iter().map(frac).collect();
                if !rep_of.contains_key(&key) {
                    return Ok(None);
                }
                if up {
                    cof.push(g);
                }
            }
            star.insert(r, cof);
        }
        let through = |p: &[Q]| arr.through(p);
        reps.sort_by(|&a, &b| {
            let (sa, sb) = (layers.layer_of_point(arr, &bary[a]), layers.layer_of_point(arr, &bary[b]));
            fp.faces[a].dim.cmp(&fp.faces[b].dim).then(sa.cmp(&sb)).then_with(|| bary[a].cmp(&bary[b]))
        });
        let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let faces: Vec<TorusFace> = reps
            .iter()
            .map(|&f| {
                let hyp = through(&bary[f]);
                let mut local: Vec<usize> = hyp.iter().map(|&i| linear.of_hypertorus[i]).collect();
                local.sort_unstable();
                local.dedup();
                TorusFace {
                    dim: fp.faces[f].dim,
                    barycenter: bary[f].clone(),
                    support: layers.layer_of_point(arr, &bary[f]),
                    local,
                    hypertori: hyp,
                }
            })
            .collect();
        let mut morphisms = Vec::new();
        for (si, &r) in reps.iter().enumerate() {
            for &g in &star[&r] {
                let key: Vec<Q> = bary[g].iter().map(frac).collect();
                let tgt_face = rep_of[&key];
                let shift: Vec<BigInt> =
                    bary[g].iter().zip(&bary[tgt_face]).map(|(a, b)| (a - b).to_integer()).collect();
                let diff: Vec<Q> = bary[g].iter().zip(&bary[r]).map(|(a, b)| a - b).collect();
                let fm = faces[si].local.iter().map(|&a| sign_of(&dot_q(&to_q(&linear.normals[a]), &diff))).collect();
                morphisms.push(FaceMorphism { src: si, tgt: pos[&tgt_face], shift, fm });
            }
        }
        morphisms.sort_by(|a, b| (a.src, a.tgt, &a.shift).cmp(&(b.src, b.tgt, &b.shift)));
        let index: HashMap<(usize, usize, Vec<BigInt>), usize> =
            morphisms.iter().enumerate().map(|(i, m)| ((m.src, m.tgt, m.shift.clone()), i)).collect();
        let zero = vec![BigInt::zero(); d];
        let identity = (0..faces.len()).map(|f| index[&(f, f, zero.clone())]).collect();
        Ok(Some(FaceCategory { faces, morphisms, identity, window: w, index }))
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity[self.morphisms[m].src] == m
    }

    pub fn find(&self, src: usize, tgt: usize, shift: &[BigInt]) -> Option<usize> {
        self.index.get(&(src, tgt, shift.to_vec())).copied()
    }

    /// Composite of `m1 : F → G` followed by `m2 : G → K`.
    pub fn compose(&self, m1: usize, m2: usize) -> usize {
        let (a, b) = (&self.morphisms[m1], &self.morphisms[m2]);
        assert_eq!(a.tgt, b.src, "morphisms are not composable");
        let shift: Vec<BigInt> = a.shift.iter().zip(&b.shift).map(|(x, y)| x + y).collect();
        self.find(a.src, b.tgt, &shift).expect("composites of attachments are attachments")
    }

    /// The face `F` and translation `t` with `p` in the open cell `rep(F) + t`.
    ///
    /// Open cells of the lifted arrangement are exactly the level sets of
    /// `p ↦ (⌊⟨χ_i,p⟩ − a_i⌋, [⟨χ_i,p⟩ − a_i ∈ Z])_i`.
    pub fn locate(&self, arr: &ToricArrangement, p: &[Q]) -> Option<(usize, Vec<BigInt>)> {
        let rows: Vec<Vec<Q>> = arr.hypertori.iter().map(|h| to_q(&h.chi)).collect();
        let key = |x: &[Q]| -> Vec<(BigInt, bool)> {
            rows.iter()
                .zip(&arr.hypertori)
                .map(|(r, h)| {
                    let v = dot_q(r, x) - &h.offset;
                    (v.floor().to_integer(), v.is_integer())
                })
                .collect()
        };
        let kp = key(p);
        for (f, face) in self.faces.iter().enumerate() {
            let kf = key(&face.barycenter);
            if kf.iter().zip(&kp).any(|(a, b)| a.1 != b.1) {
                continue;
            }
            let rhs: Vec<Q> = kf.iter().zip(&kp).map(|(a, b)| Q::from_integer(&b.0 - &a.0)).collect();
            if let Some(t) = crate::lattice::solve_q(&rows, &rhs, arr.dim) {
                if t.iter().all(|x| x.is_integer()) {
                    return Some((f, t.iter().map(|x| x.to_integer()).collect()));
                }
            }
        }
        None
    }

    pub fn from(&self, f: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].src == f).collect()
    }

    /// Cell counts by dimension.
    pub fn cell_counts(&self) -> Vec<usize> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        (0..=top).map(|k| self.faces.iter().filter(|f| f.dim == k).count()).collect()
    }

    /// The acyclic category on non-identity morphisms, with the index map
    /// from its morphisms to `self.morphisms`.
    pub fn category(&self) -> (AcyclicCategory, Vec<usize>) {
        let keep: Vec<usize> = (0..self.morphisms.len()).filter(|&m| !self.is_identity(m)).collect();
        let mut new = vec![usize::MAX; self.morphisms.len()];
        for (i, &m) in keep.iter().enumerate() {
            new[m] = i;
        }
        let mut compose = HashMap::new();
        for &m1 in &keep {
            for &m2 in &keep {
                if self.morphisms[m1].tgt == self.morphisms[m2].src {
                    compose.insert((new[m1], new[m2]), new[self.compose(m1, m2)]);
                }
            }
        }
        let mors = keep.iter().map(|&m| (self.morphisms[m].src, self.morphisms[m].tgt)).collect();
        (AcyclicCategory::new(self.faces.len(), mors, compose).expect("face categories are acyclic"), keep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::tests::{example, ht};

    fn build(arr: &ToricArrangement) -> FaceCategory {
        let lm = LinearModel::new(arr).unwrap();
        let lp = LayerPoset::new(arr).unwrap();
        FaceCategory::new(arr, &lm, &lp).unwrap()
    }

    #[test]
    fn circle_cut_once() {
        let arr = ToricArrangement::new(1, vec![ht("z", &[1], 0, 1)], None).unwrap();
        let fc = build(&arr);
        assert_eq!(fc.cell_counts(), vec![1, 1]);
        let nonid: Vec<&FaceMorphism> =
            (0..fc.morphisms.len()).filter(|&m| !fc.is_identity(m)).map(|m| &fc.morphisms[m]).collect();
        assert_eq!(nonid.len(), 2);
        let fms: Vec<&SignVector> = nonid.iter().map(|m| &m.fm).collect();
        assert!(fms.contains(&&vec![1]) && fms.contains(&&vec![-1]));
    }

    #[test]
    fn example_cells() {
        let fc = build(&example());
        assert_eq!(fc.cell_counts(), vec![2, 5, 3]);
        let euler: i64 = fc.cell_counts().iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        assert_eq!(euler, 0);
        // The vertex at the origin sees all three lines.
        assert_eq!(fc.faces[0].local, vec![0, 1, 2]);
        assert_eq!(fc.faces[1].local, vec![0, 1]);
    }

    #[test]
    fn fundamental_domain_oracle() {
        // Count orbits directly: a face is counted once when its barycenter,
        // computed from a large window, lands in [0,1)^d.
        let arr = example();
        let fc = build(&arr);
        let lifted = lift(&arr, 3).unwrap();
        let fp = FacePoset::new(&lifted.arrangement);
        let vertices: Vec<usize> = (0..fp.len()).filter(|&f| fp.faces[f].dim == 0).collect();
        let mut counts = vec![0usize; 3];
        for f in 0..fp.len() {
            let vs: Vec<&Vec<Q>> =
                vertices.iter().filter(|&&v| face_leq(fp.sign(v), fp.sign(f))).map(|&v| &fp.faces[v].witness).collect();
            if vs.is_empty() {
                continue;
            }
            let k = Q::from_integer(BigInt::from(vs.len()));
            let b: Vec<Q> = (0..2).map(|c| vs.iter().fold(Q::zero(), |a, v| a + &v[c]) / &k).collect();
            // Faces deep inside the window are bounded; test the witness as well.
            let inner = vs.iter().all(|v| v.iter().all(|x| x > &Q::from_integer((-2).into()) && x < &Q::from_integer(3.into())));
            if inner && fp.faces[f].dim < 3 && b.iter().all(|x| x >= &Q::zero() && x < &Q::one()) {
                counts[fp.faces[f].dim] += 1;
            }
        }
        assert_eq!(counts, fc.cell_counts());
    }

    #[test]
    fn composition_is_associative() {
        let fc = build(&example());
        let m = fc.morphisms.len();
        for a in 0..m {
            for b in 0..m {
                if fc.morphisms[a].tgt != fc.morphisms[b].src {
                    continue;
                }
                let ab = fc.compose(a, b);
                for c in 0..m {
                    if fc.morphisms[b].tgt == fc.morphisms[c].src {
                        assert_eq!(fc.compose(ab, c), fc.compose(a, fc.compose(b, c)));
                    }
                }
            }
        }
    }
}
