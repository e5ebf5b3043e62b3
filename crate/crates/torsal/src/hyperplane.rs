//! Sign-vector calculus for finite real arrangements of affine hyperplanes.
//!
//! Signs are `-1`, `0`, `+1` with the positive side of a hyperplane
//! `⟨n, x⟩ = c` being `⟨n, x⟩ > c`. Faces are enumerated flat by flat: each
//! flat contributes the chambers of the arrangement it inherits, found by
//! pushing faces of the codimension-one subflats off their hyperplane.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{dot_q, rank_q, Q};

pub type SignVector = Vec<i8>;

pub fn sign_of(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl Hyperplane {
    pub fn linear(normal: Vec<Q>) -> Self {
        Hyperplane { normal, offset: Q::zero() }
    }

    /// `⟨n, x⟩ − c`
    pub fn eval(&self, x: &[Q]) -> Q {
        dot_q(&self.normal, x) - &self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneArrangement {
    pub dim: usize,
    pub hyperplanes: Vec<Hyperplane>,
}

fn proportional(a: &[Q], b: &[Q]) -> bool {
    let Some(i) = a.iter().position(|x| !x.is_zero()) else { return b.iter().all(Zero::is_zero) };
    if b[i].is_zero() {
        return false;
    }
    let r = &b[i] / &a[i];
    a.iter().zip(b).all(|(x, y)| &(x * &r) == y)
}

impl HyperplaneArrangement {
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.normal.len() != dim {
                return Err(Error::Dimension(format!("hyperplane {i} has a normal of length {}", h.normal.len())));
            }
            if h.normal.iter().all(Zero::is_zero) {
                return Err(Error::Input(format!("hyperplane {i} has a zero normal")));
            }
        }
        for i in 0..hyperplanes.len() {
            for j in 0..i {
                let mut a = hyperplanes[i].normal.clone();
                a.push(hyperplanes[i].offset.clone());
                let mut b = hyperplanes[j].normal.clone();
                b.push(hyperplanes[j].offset.clone());
                if proportional(&a, &b) {
                    return Err(Error::Input(format!("hyperplanes {j} and {i} coincide")));
                }
            }
        }
        Ok(HyperplaneArrangement { dim, hyperplanes })
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn is_central(&self) -> bool {
        self.hyperplanes.iter().all(|h| h.offset.is_zero())
    }

    pub fn sign_vector(&self, x: &[Q]) -> SignVector {
        self.hyperplanes.iter().map(|h| sign_of(&h.eval(x))).collect()
    }

    /// The subarrangement on the given hyperplane indices, in that order.
    pub fn sub(&self, idx: &[usize]) -> HyperplaneArrangement {
        HyperplaneArrangement { dim: self.dim, hyperplanes: idx.iter().map(|&i| self.hyperplanes[i].clone()).collect() }
    }
}

/// An affine flat `point + span(basis)` with the set of hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub zero: Vec<usize>,
    pub point: Vec<Q>,
    pub basis: Vec<Vec<Q>>,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn contains_flat(h: &Hyperplane, point: &[Q], basis: &[Vec<Q>]) -> bool {
    h.eval(point).is_zero() && basis.iter().all(|b| dot_q(&h.normal, b).is_zero())
}

/// All nonempty flats (intersections of hyperplanes), the ambient space included.
///
/// Sorted by decreasing dimension, then by zero set.
pub fn flats(arr: &HyperplaneArrangement) -> Vec<Flat> {
    let d = arr.dim;
    let whole = Flat {
        zero: vec![],
        point: vec![Q::zero(); d],
        basis: (0..d).map(|i| (0..d).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect(),
    };
    let mut seen: BTreeMap<Vec<usize>, Flat> = BTreeMap::new();
    seen.insert(vec![], whole.clone());
    let mut queue = VecDeque::from([whole]);
    while let Some(x) = queue.pop_front() {
        for (hi, h) in arr.hyperplanes.iter().enumerate() {
            if x.zero.contains(&hi) {
                continue;
            }
            let rates: Vec<Q> = x.basis.iter().map(|b| dot_q(&h.normal, b)).collect();
            let Some(piv) = rates.iter().position(|r| !r.is_zero()) else { continue };
            let s = -h.eval(&x.point) / &rates[piv];
            let point: Vec<Q> = x.point.iter().zip(&x.basis[piv]).map(|(p, b)| p + &s * b).collect();
            let basis: Vec<Vec<Q>> = (0..x.basis.len())
                .filter(|&j| j != piv)
                .map(|j| {
                    let f = &rates[j] / &rates[piv];
                    x.basis[j].iter().zip(&x.basis[piv]).map(|(a, b)| a - &f * b).collect()
                })
                .collect();
            let zero: Vec<usize> =
                (0..arr.len()).filter(|&k| contains_flat(&arr.hyperplanes[k], &point, &basis)).collect();
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(zero.clone()) {
                let f = Flat { zero, point, basis };
                e.insert(f.clone());
                queue.push_back(f);
            }
        }
    }
    let mut out: Vec<Flat> = seen.into_values().collect();
    out.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.zero.cmp(&b.zero)));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub sign: SignVector,
    pub dim: usize,
    /// A rational point realizing `sign` exactly.
    pub witness: Vec<Q>,
}

impl Face {
    pub fn zero_set(&self) -> Vec<usize> {
        zero_set(&self.sign)
    }
}

pub fn zero_set(s: &[i8]) -> Vec<usize> {
    s.iter().enumerate().filter(|(_, &x)| x == 0).map(|(i, _)| i).collect()
}

/// `F ≤ G` in the face poset: `F` lies in the closure of `G`.
pub fn face_leq(f: &[i8], g: &[i8]) -> bool {
    f.iter().zip(g).all(|(a, b)| *a == 0 || a == b)
}

/// The face `F_G`: signs of `G` where nonzero, of `F` elsewhere.
pub fn compose(f: &[i8], g: &[i8]) -> SignVector {
    f.iter().zip(g).map(|(a, b)| if *b == 0 { *a } else { *b }).collect()
}

/// Restriction of a sign vector to the hyperplanes at positions `idx`.
pub fn restrict(f: &[i8], idx: &[usize]) -> SignVector {
    idx.iter().map(|&i| f[i]).collect()
}

/// Positions where both vectors are nonzero and differ.
pub fn separators(c1: &[i8], c2: &[i8]) -> Vec<usize> {
    c1.iter().zip(c2).enumerate().filter(|(_, (a, b))| **a != 0 && **b != 0 && a != b).map(|(i, _)| i).collect()
}

pub fn negate(f: &[i8]) -> SignVector {
    f.iter().map(|x| -x).collect()
}

/// The face poset of an arrangement with one witness point per face.
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub arrangement: HyperplaneArrangement,
    /// Sorted by dimension, then sign vector.
    pub faces: Vec<Face>,
    pub flats: Vec<Flat>,
    index: HashMap<SignVector, usize>,
}

impl FacePoset {
    pub fn new(arr: &HyperplaneArrangement) -> Self {
        let flats = flats(arr);
        let mut faces: Vec<Face> = Vec::new();
        let mut by_sign: HashMap<SignVector, usize> = HashMap::new();
        // Lowest-dimensional flats first so subflat faces exist when needed.
        let mut order: Vec<&Flat> = flats.iter().collect();
        order.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.zero.cmp(&b.zero)));
        for x in order {
            let cuts = arr
                .hyperplanes
                .iter()
                .enumerate()
                .any(|(i, h)| !x.zero.contains(&i) && x.basis.iter().any(|b| !dot_q(&h.normal, b).is_zero()));
            if !cuts {
                let sign = arr.sign_vector(&x.point);
                by_sign.entry(sign.clone()).or_insert_with(|| {
                    faces.push(Face { sign, dim: x.dim(), witness: x.point.clone() });
                    faces.len() - 1
                });
                continue;
            }
            let lower: Vec<usize> = (0..faces.len())
                .filter(|&g| faces[g].dim + 1 == x.dim() && x.zero.iter().all(|&z| faces[g].sign[z] == 0))
                .collect();
            for g in lower {
                let gz = faces[g].zero_set();
                let v = x
                    .basis
                    .iter()
                    .find(|b| gz.iter().any(|&k| !x.zero.contains(&k) && !dot_q(&arr.hyperplanes[k].normal, b).is_zero()))
                    .expect("a codimension-one subflat has a transverse direction")
                    .clone();
                let w = faces[g].witness.clone();
                let mut eps: Option<Q> = None;
                for h in &arr.hyperplanes {
                    let val = h.eval(&w);
                    let rate = dot_q(&h.normal, &v);
                    if !val.is_zero() && !rate.is_zero() {
                        let b = (val / rate).abs();
                        if eps.as_ref().is_none_or(|e| &b < e) {
                            eps = Some(b);
                        }
                    }
                }
                let eps = eps.map_or_else(Q::one, |e| e / Q::from_integer(2.into()));
                for s in [Q::one(), -Q::one()] {
                    let p: Vec<Q> = w.iter().zip(&v).map(|(a, b)| a + &s * &eps * b).collect();
                    let sign = arr.sign_vector(&p);
                    if !by_sign.contains_key(&sign) {
                        by_sign.insert(sign.clone(), faces.len());
                        faces.push(Face { sign, dim: x.dim(), witness: p });
                    }
                }
            }
        }
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.sign.cmp(&b.sign)));
        let index = faces.iter().enumerate().map(|(i, f)| (f.sign.clone(), i)).collect();
        FacePoset { arrangement: arr.clone(), faces, flats, index }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, sign: &[i8]) -> Option<usize> {
        self.index.get(sign).copied()
    }

    pub fn is_face(&self, sign: &[i8]) -> bool {
        self.index.contains_key(sign)
    }

    pub fn sign(&self, f: usize) -> &SignVector {
        &self.faces[f].sign
    }

    pub fn chambers(&self) -> Vec<usize> {
        let d = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        (0..self.faces.len()).filter(|&i| self.faces[i].dim == d).collect()
    }

    pub fn is_chamber(&self, f: usize) -> bool {
        self.faces[f].sign.iter().all(|&s| s != 0)
    }

    pub fn leq(&self, f: usize, g: usize) -> bool {
        face_leq(&self.faces[f].sign, &self.faces[g].sign)
    }

    /// Index of `F_G`.
    pub fn compose(&self, f: usize, g: usize) -> usize {
        self.index_of(&compose(&self.faces[f].sign, &self.faces[g].sign)).expect("composition of faces is a face")
    }

    /// Faces whose zero set is exactly `zero`, i.e. the open faces spanning that flat.
    pub fn faces_spanning(&self, zero: &[usize]) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.faces[f].zero_set() == zero).collect()
    }

    /// Chamber obtained from `c` by flipping every hyperplane containing the flat `zero`.
    pub fn opposite_chamber(&self, c: usize, zero: &[usize]) -> Result<usize> {
        let s = &self.faces[c].sign;
        let mut trace = s.clone();
        for &z in zero {
            trace[z] = 0;
        }
        if !self.is_face(&trace) {
            return Err(Error::Input("chamber is not adjacent to the flat".into()));
        }
        let mut op = s.clone();
        for &z in zero {
            op[z] = -op[z];
        }
        self.index_of(&op).ok_or_else(|| Error::Check("opposite chamber does not exist".into()))
    }

    /// Greedy minimal gallery: always step to the lexicographically least
    /// neighbouring chamber that is one hyperplane closer to the target.
    pub fn minimal_gallery(&self, from: usize, to: usize) -> Vec<usize> {
        let target = &self.faces[to].sign;
        let mut out = vec![from];
        let mut cur = from;
        while cur != to {
            let s = &self.faces[cur].sign;
            let next = separators(s, target)
                .into_iter()
                .filter_map(|h| {
                    let mut n = s.clone();
                    n[h] = -n[h];
                    self.index_of(&n)
                })
                .min_by(|a, b| self.faces[*a].sign.cmp(&self.faces[*b].sign))
                .expect("some separating hyperplane bounds the current chamber");
            out.push(next);
            cur = next;
        }
        out
    }

    /// Every minimal gallery from `from` to `to`.
    pub fn minimal_galleries(&self, from: usize, to: usize) -> Vec<Vec<usize>> {
        if from == to {
            return vec![vec![from]];
        }
        let s = &self.faces[from].sign;
        let target = &self.faces[to].sign;
        let mut out = Vec::new();
        for h in separators(s, target) {
            let mut n = s.clone();
            n[h] = -n[h];
            if let Some(next) = self.index_of(&n) {
                for mut tail in self.minimal_galleries(next, to) {
                    tail.insert(0, from);
                    out.push(tail);
                }
            }
        }
        out
    }
}

/// The Salvetti poset `{[G,C] : G ≤ C}` of an arrangement.
///
/// Ordered as cells: `[G',C'] ≤ [G,C]` iff `G ≤ G'` and `C_{G'} = C'`, so
/// vertices `[C,C]` are minimal and a cell has dimension `codim G`.
#[derive(Clone, Debug)]
pub struct SalvettiPoset {
    pub cells: Vec<(usize, usize)>,
    pub cell_dim: Vec<usize>,
    index: HashMap<(usize, usize), usize>,
}

impl SalvettiPoset {
    pub fn new(fp: &FacePoset) -> Self {
        let top = fp.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        let chambers = fp.chambers();
        let mut cells = Vec::new();
        for g in 0..fp.len() {
            for &c in &chambers {
                if fp.leq(g, c) {
                    cells.push((g, c));
                }
            }
        }
        cells.sort_by_key(|&(g, c)| (top - fp.faces[g].dim, g, c));
        let cell_dim = cells.iter().map(|&(g, _)| top - fp.faces[g].dim).collect();
        let index = cells.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        SalvettiPoset { cells, cell_dim, index }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, g: usize, c: usize) -> Option<usize> {
        self.index.get(&(g, c)).copied()
    }

    /// Cell order with vertices minimal.
    pub fn leq(&self, fp: &FacePoset, x: usize, y: usize) -> bool {
        let (g1, c1) = self.cells[x];
        let (g, c) = self.cells[y];
        fp.leq(g, g1) && fp.compose(c, g1) == c1
    }

    /// `S_C = {[G,K] : K = C_G}`.
    pub fn s_chamber(&self, fp: &FacePoset, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| fp.compose(c, self.cells[i].0) == self.cells[i].1).collect()
    }

    /// `S^G = ⋃_{C ≥ G} S_C`.
    pub fn s_upper(&self, fp: &FacePoset, g: usize) -> Vec<usize> {
        let cs: Vec<usize> = fp.chambers().into_iter().filter(|&c| fp.leq(g, c)).collect();
        (0..self.len()).filter(|&i| cs.iter().any(|&c| fp.compose(c, self.cells[i].0) == self.cells[i].1)).collect()
    }
}

/// The inclusion `i_m : F(A[G]) → F(A[F])` on sign vectors.
///
/// `source` and `target` list the hyperplanes of the two local arrangements
/// by their global indices; `target ⊆ source`. `fm` is a sign vector on
/// `source` whose zero set is exactly `target`; `k` is a sign vector on `target`.
pub fn i_m(source: &[usize], target: &[usize], fm: &[i8], k: &[i8]) -> Result<SignVector> {
    let zeros: Vec<usize> = source.iter().zip(fm).filter(|(_, &s)| s == 0).map(|(&h, _)| h).collect();
    if zeros != target {
        return Err(Error::Input("F_m zero set does not match the target arrangement".into()));
    }
    let mut out = fm.to_vec();
    for (pos, &h) in source.iter().enumerate() {
        if let Ok(t) = target.binary_search(&h) {
            out[pos] = k[t];
        }
    }
    Ok(out)
}

fn independent(arr: &HyperplaneArrangement, s: &[usize]) -> bool {
    let rows: Vec<Vec<Q>> = s.iter().map(|&i| arr.hyperplanes[i].normal.clone()).collect();
    rank_q(&rows, arr.dim) == s.len()
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimal dependent subsets of the normals, as sorted index lists.
pub fn circuits(arr: &HyperplaneArrangement) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for k in 1..=arr.dim + 1 {
        for s in subsets_of_size(arr.len(), k) {
            if !independent(arr, &s) && out.iter().all(|c| !c.iter().all(|x| s.contains(x))) {
                out.push(s);
            }
        }
    }
    out
}

/// nbc sets of a central arrangement with respect to `ordering`, grouped by size.
///
/// `ordering[r]` is the hyperplane of rank `r`; each set is listed in
/// increasing rank, and sets of one size are sorted lexicographically by ranks.
pub fn nbc_basis(arr: &HyperplaneArrangement, ordering: &[usize]) -> Result<Vec<Vec<Vec<usize>>>> {
    if !arr.is_central() {
        return Err(Error::Input("nbc sets need a central arrangement".into()));
    }
    let mut rank = vec![usize::MAX; arr.len()];
    for (r, &h) in ordering.iter().enumerate() {
        if h >= arr.len() || rank[h] != usize::MAX {
            return Err(Error::Input("ordering is not a permutation of the hyperplanes".into()));
        }
        rank[h] = r;
    }
    if ordering.len() != arr.len() {
        return Err(Error::Input("ordering is not a permutation of the hyperplanes".into()));
    }
    let broken: Vec<BTreeSet<usize>> = circuits(arr)
        .into_iter()
        .map(|c| {
            let min = *c.iter().min_by_key(|&&h| rank[h]).expect("circuits are nonempty");
            c.into_iter().filter(|&h| h != min).collect()
        })
        .collect();
    let mut out = Vec::new();
    for k in 0..=arr.dim {
        let mut level: Vec<Vec<usize>> = Vec::new();
        for s in subsets_of_size(arr.len(), k) {
            if !independent(arr, &s) {
                continue;
            }
            let set: BTreeSet<usize> = s.iter().copied().collect();
            if broken.iter().any(|b| b.is_subset(&set)) {
                continue;
            }
            let mut ordered = s.clone();
            ordered.sort_by_key(|&h| rank[h]);
            level.push(ordered);
        }
        level.sort_by_key(|s| s.iter().map(|&h| rank[h]).collect::<Vec<_>>());
        if level.is_empty() {
            break;
        }
        out.push(level);
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lattice::{q, qi};
    use proptest::prelude::*;

    pub fn lin(n: &[i64]) -> Hyperplane {
        Hyperplane::linear(n.iter().map(|&x| qi(x)).collect())
    }

    /// W0: x0 = 0, W1: x0 + 2x1 = 0, W2: x1 = 0.
    pub fn example_a0() -> HyperplaneArrangement {
        HyperplaneArrangement::new(2, vec![lin(&[1, 0]), lin(&[1, 2]), lin(&[0, 1])]).unwrap()
    }

    /// Independent feasibility oracle: Fourier–Motzkin elimination on
    /// equalities and strict inequalities.
    pub fn feasible(arr: &HyperplaneArrangement, sign: &[i8]) -> bool {
        // Constraints a·x + b (op) 0 with op ∈ {=, >}.
        let mut eqs: Vec<(Vec<Q>, Q)> = Vec::new();
        let mut gts: Vec<(Vec<Q>, Q)> = Vec::new();
        for (h, &s) in arr.hyperplanes.iter().zip(sign) {
            let a = h.normal.clone();
            let b = -h.offset.clone();
            match s {
                0 => eqs.push((a, b)),
                1 => gts.push((a, b)),
                _ => gts.push((a.iter().map(|x| -x).collect(), -b)),
            }
        }
        let d = arr.dim;
        for var in 0..d {
            if let Some(p) = eqs.iter().position(|(a, _)| !a[var].is_zero()) {
                let (pa, pb) = eqs.remove(p);
                let sub = |(a, b): (Vec<Q>, Q)| -> (Vec<Q>, Q) {
                    let f = &a[var] / &pa[var];
                    (a.iter().zip(&pa).map(|(x, y)| x - &f * y).collect(), b - &f * &pb)
                };
                eqs = eqs.into_iter().map(sub).collect();
                gts = gts.into_iter().map(sub).collect();
                continue;
            }
            let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
            for c in gts {
                match sign_of(&c.0[var]) {
                    1 => pos.push(c),
                    -1 => neg.push(c),
                    _ => rest.push(c),
                }
            }
            for (pa, pb) in &pos {
                for (na, nb) in &neg {
                    let (fp, fn_) = (-&na[var], pa[var].clone());
                    let a = pa.iter().zip(na).map(|(x, y)| x * &fp + y * &fn_).collect();
                    rest.push((a, pb * &fp + nb * &fn_));
                }
            }
            gts = rest;
        }
        eqs.iter().all(|(_, b)| b.is_zero()) && gts.iter().all(|(_, b)| b.is_positive())
    }

    fn all_signs(n: usize) -> Vec<SignVector> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|v| [-1i8, 0, 1].map(|s| [v.clone(), vec![s]].concat())).collect();
        }
        out
    }

    fn oracle_faces(arr: &HyperplaneArrangement) -> BTreeSet<SignVector> {
        all_signs(arr.len()).into_iter().filter(|s| feasible(arr, s)).collect()
    }

    #[test]
    fn empty_arrangement_has_one_face() {
        let fp = FacePoset::new(&HyperplaneArrangement::new(2, vec![]).unwrap());
        assert_eq!(fp.len(), 1);
        assert_eq!(fp.faces[0].dim, 2);
    }

    #[test]
    fn example_a0_faces() {
        let a0 = example_a0();
        let fp = FacePoset::new(&a0);
        assert_eq!(fp.len(), 13);
        assert_eq!(fp.chambers().len(), 6);
        assert_eq!(fp.faces.iter().filter(|f| f.dim == 1).count(), 6);
        assert_eq!(a0.sign_vector(&[qi(-1), qi(1)]), vec![-1, 1, 1]);
        let found: BTreeSet<SignVector> = fp.faces.iter().map(|f| f.sign.clone()).collect();
        assert_eq!(found, oracle_faces(&a0));
        for f in &fp.faces {
            assert_eq!(a0.sign_vector(&f.witness), f.sign);
        }
    }

    #[test]
    fn composition_and_restriction() {
        let fp = FacePoset::new(&example_a0());
        let b0 = fp.index_of(&[-1, 1, 1]).unwrap();
        let origin = fp.index_of(&[0, 0, 0]).unwrap();
        assert_eq!(fp.compose(origin, b0), b0);
        assert_eq!(fp.compose(b0, origin), b0);
        for f in 0..fp.len() {
            assert_eq!(fp.compose(f, f), f);
        }
        assert_eq!(restrict(&[-1, 1, 1], &[0]), vec![-1]);
        assert_eq!(restrict(&[-1, 1, 1], &[0, 1, 2]), vec![-1, 1, 1]);
    }

    #[test]
    fn separators_and_opposites() {
        let fp = FacePoset::new(&example_a0());
        let b0 = fp.index_of(&[-1, 1, 1]).unwrap();
        let b1 = fp.index_of(&[-1, -1, 1]).unwrap();
        assert!(separators(fp.sign(b0), fp.sign(b0)).is_empty());
        assert_eq!(separators(fp.sign(b0), fp.sign(b1)), vec![1]);
        assert_eq!(separators(fp.sign(b0), &negate(fp.sign(b0))), vec![0, 1, 2]);
        assert_eq!(fp.opposite_chamber(b0, &[]).unwrap(), b0);
        assert_eq!(fp.sign(fp.opposite_chamber(b0, &[0]).unwrap()), &vec![1, 1, 1]);
        assert_eq!(fp.sign(fp.opposite_chamber(b0, &[0, 1, 2]).unwrap()), &vec![1, -1, -1]);
        // B1 has no wall on W0.
        assert!(fp.opposite_chamber(b1, &[0]).is_err());
    }

    #[test]
    fn galleries() {
        let fp = FacePoset::new(&example_a0());
        let b0 = fp.index_of(&[-1, 1, 1]).unwrap();
        assert_eq!(fp.minimal_gallery(b0, b0), vec![b0]);
        let target = fp.index_of(&[-1, -1, -1]).unwrap();
        let g: Vec<SignVector> = fp.minimal_gallery(b0, target).iter().map(|&c| fp.sign(c).clone()).collect();
        assert_eq!(g, vec![vec![-1, 1, 1], vec![-1, -1, 1], vec![-1, -1, -1]]);
        let anti = fp.index_of(&[1, -1, -1]).unwrap();
        assert_eq!(fp.minimal_gallery(b0, anti).len(), 4);
        // Around the origin of three lines there are two ways to reach the opposite chamber.
        let all = fp.minimal_galleries(b0, anti);
        assert_eq!(all.len(), 2);
        assert!(all.contains(&fp.minimal_gallery(b0, anti)));
        assert_eq!(fp.minimal_galleries(b0, target).len(), 1);
    }

    #[test]
    fn salvetti_small() {
        let empty = FacePoset::new(&HyperplaneArrangement::new(1, vec![]).unwrap());
        assert_eq!(SalvettiPoset::new(&empty).len(), 1);
        let line = FacePoset::new(&HyperplaneArrangement::new(1, vec![lin(&[1])]).unwrap());
        let s = SalvettiPoset::new(&line);
        assert_eq!(s.cell_dim.iter().filter(|&&d| d == 0).count(), 2);
        assert_eq!(s.cell_dim.iter().filter(|&&d| d == 1).count(), 2);
        let fp = FacePoset::new(&example_a0());
        let s = SalvettiPoset::new(&fp);
        let count = |k| s.cell_dim.iter().filter(|&&d| d == k).count();
        assert_eq!((count(0), count(1), count(2)), (6, 12, 6));
    }

    #[test]
    fn salvetti_order_is_partial_order() {
        let fp = FacePoset::new(&example_a0());
        let s = SalvettiPoset::new(&fp);
        let n = s.len();
        for x in 0..n {
            assert!(s.leq(&fp, x, x));
            for y in 0..n {
                if x != y && s.leq(&fp, x, y) {
                    assert!(!s.leq(&fp, y, x));
                    assert!(s.cell_dim[x] < s.cell_dim[y]);
                }
                for z in 0..n {
                    if s.leq(&fp, x, y) && s.leq(&fp, y, z) {
                        assert!(s.leq(&fp, x, z));
                    }
                }
            }
        }
    }

    #[test]
    fn salvetti_strata() {
        let fp = FacePoset::new(&example_a0());
        let s = SalvettiPoset::new(&fp);
        let origin = fp.index_of(&[0, 0, 0]).unwrap();
        // Every cell lies in S_C for at least one chamber; S^{origin} is everything.
        assert_eq!(s.s_upper(&fp, origin).len(), s.len());
        let b0 = fp.index_of(&[-1, 1, 1]).unwrap();
        // S_C of a central arrangement has one cell per face.
        assert_eq!(s.s_chamber(&fp, b0).len(), fp.len());
    }

    #[test]
    fn i_m_examples() {
        // Identity when the target is everything and F_m is the minimal face.
        assert_eq!(i_m(&[0, 1, 2], &[0, 1, 2], &[0, 0, 0], &[1, -1, 1]).unwrap(), vec![1, -1, 1]);
        // Constant map when the target is empty.
        assert_eq!(i_m(&[0, 1, 2], &[], &[1, 1, -1], &[]).unwrap(), vec![1, 1, -1]);
        // One line into three concurrent lines: chambers land next to F_m.
        let fp = FacePoset::new(&example_a0());
        let fm = vec![0, 1, 1];
        let a = i_m(&[0, 1, 2], &[0], &fm, &[1]).unwrap();
        let b = i_m(&[0, 1, 2], &[0], &fm, &[-1]).unwrap();
        assert!(fp.is_chamber(fp.index_of(&a).unwrap()));
        assert!(fp.is_chamber(fp.index_of(&b).unwrap()));
        assert!(face_leq(&fm, &a) && face_leq(&fm, &b));
        assert!(i_m(&[0, 1, 2], &[1], &fm, &[1]).is_err());
    }

    #[test]
    fn nbc_examples() {
        let two = HyperplaneArrangement::new(2, vec![lin(&[1, 0]), lin(&[0, 1])]).unwrap();
        assert_eq!(nbc_basis(&two, &[1, 0]).unwrap()[2], vec![vec![1, 0]]);
        let a0 = example_a0();
        assert_eq!(nbc_basis(&a0, &[2, 0, 1]).unwrap()[2], vec![vec![2, 0], vec![2, 1]]);
        assert_eq!(nbc_basis(&a0, &[0, 1, 2]).unwrap()[2], vec![vec![0, 1], vec![0, 2]]);
        assert!(nbc_basis(&a0, &[0, 1]).is_err());
    }

    /// Whitney's formula for the characteristic polynomial of a central arrangement.
    fn char_poly_abs_coeffs(arr: &HyperplaneArrangement) -> Vec<i64> {
        let mut coeff = vec![0i64; arr.dim + 1];
        for mask in 0u32..(1 << arr.len()) {
            let s: Vec<usize> = (0..arr.len()).filter(|i| mask & (1 << i) != 0).collect();
            let rows: Vec<Vec<Q>> = s.iter().map(|&i| arr.hyperplanes[i].normal.clone()).collect();
            let r = rank_q(&rows, arr.dim);
            coeff[r] += if s.len().is_multiple_of(2) { 1 } else { -1 };
        }
        coeff.iter().map(|c| c.abs()).collect()
    }

    fn central_arrangement() -> impl Strategy<Value = HyperplaneArrangement> {
        (2usize..4, 1usize..6).prop_flat_map(|(d, n)| {
            proptest::collection::vec(proptest::collection::vec(-2i64..3, d), n).prop_filter_map(
                "distinct nonzero normals",
                move |ns| {
                    let hs = ns.iter().map(|n| lin(n)).collect();
                    HyperplaneArrangement::new(d, hs).ok()
                },
            )
        })
    }

    fn affine_arrangement() -> impl Strategy<Value = HyperplaneArrangement> {
        (1usize..3, 1usize..5).prop_flat_map(|(d, n)| {
            proptest::collection::vec((proptest::collection::vec(-2i64..3, d), -2i64..3), n).prop_filter_map(
                "distinct nonzero hyperplanes",
                move |ns| {
                    let hs = ns
                        .iter()
                        .map(|(n, o)| Hyperplane { normal: n.iter().map(|&x| qi(x)).collect(), offset: q(*o, 2) })
                        .collect();
                    HyperplaneArrangement::new(d, hs).ok()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn enumeration_matches_oracle(arr in affine_arrangement()) {
            let fp = FacePoset::new(&arr);
            let found: BTreeSet<SignVector> = fp.faces.iter().map(|f| f.sign.clone()).collect();
            prop_assert_eq!(found, oracle_faces(&arr));
            for f in &fp.faces {
                prop_assert_eq!(&arr.sign_vector(&f.witness), &f.sign);
            }
        }

        #[test]
        fn central_enumeration_matches_oracle(arr in central_arrangement()) {
            prop_assume!(arr.len() <= 4);
            let fp = FacePoset::new(&arr);
            let found: BTreeSet<SignVector> = fp.faces.iter().map(|f| f.sign.clone()).collect();
            prop_assert_eq!(found, oracle_faces(&arr));
        }

        #[test]
        fn composition_identities(arr in affine_arrangement()) {
            let fp = FacePoset::new(&arr);
            for f in 0..fp.len() {
                for g in 0..fp.len() {
                    let fg = fp.compose(f, g);
                    prop_assert_eq!(fp.compose(fg, g), fg);
                    for x in &fp.flats {
                        let gx = restrict(fp.sign(f), &x.zero);
                        let kx = restrict(fp.sign(g), &x.zero);
                        prop_assert_eq!(compose(&gx, &kx), restrict(&compose(fp.sign(f), fp.sign(g)), &x.zero));
                    }
                }
            }
        }

        #[test]
        fn gallery_lengths(arr in affine_arrangement()) {
            let fp = FacePoset::new(&arr);
            let ch = fp.chambers();
            for &a in &ch {
                for &b in &ch {
                    let g = fp.minimal_gallery(a, b);
                    prop_assert_eq!(g.len() - 1, separators(fp.sign(a), fp.sign(b)).len());
                    for w in g.windows(2) {
                        prop_assert_eq!(separators(fp.sign(w[0]), fp.sign(w[1])).len(), 1);
                    }
                }
            }
        }

        #[test]
        fn central_line_chambers(n in 1usize..6) {
            let hs = (0..n).map(|k| lin(&[1, k as i64])).collect();
            let fp = FacePoset::new(&HyperplaneArrangement::new(2, hs).unwrap());
            prop_assert_eq!(fp.chambers().len(), 2 * n);
        }

        #[test]
        fn nbc_counts_match_characteristic_polynomial(arr in central_arrangement()) {
            let ordering: Vec<usize> = (0..arr.len()).collect();
            let nbc = nbc_basis(&arr, &ordering).unwrap();
            let coeff = char_poly_abs_coeffs(&arr);
            for (k, c) in coeff.iter().enumerate() {
                let count = nbc.get(k).map_or(0, |l| l.len()) as i64;
                prop_assert_eq!(count, *c);
            }
        }
    }
}
