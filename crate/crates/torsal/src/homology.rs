//! Integral chain complexes and homology with explicit representatives.
//!
//! Homology is computed in two stages. Unit pivots are eliminated sparsely,
//! keeping for every surviving basis element the original chain it stands
//! for; the small remaining complex is then handled by Smith normal forms
//! over `BigInt`. Cocycles come from the same procedure on the dual complex
//! and are rebased so that they pair to the identity with the cycles.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::category::{AcyclicCategory, Nerve, Simplex};
use crate::error::{Error, Result};
use crate::lattice::{smith_normal_form, IntMatrix};

pub type SparseCol = Vec<(usize, i64)>;

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow)
}

pub fn pair(a: &[i64], b: &[i64]) -> Result<i64> {
    a.iter().zip(b).try_fold(0i64, |acc, (x, y)| add(acc, mul(*x, *y)?))
}

#[derive(Clone, Debug)]
pub struct ChainComplex {
    /// Rank of `C_k`; `C_k = 0` above the last entry.
    pub dims: Vec<usize>,
    /// `boundary[k] : C_k → C_{k−1}` by columns; `boundary[0]` is empty.
    pub boundary: Vec<Vec<SparseCol>>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, boundary: Vec<Vec<SparseCol>>) -> Result<Self> {
        if dims.len() != boundary.len() {
            return Err(Error::Dimension("one boundary map per degree is required".into()));
        }
        for (k, cols) in boundary.iter().enumerate() {
            let rows = if k == 0 { 0 } else { dims[k - 1] };
            if (k == 0 && !cols.is_empty()) || (k > 0 && cols.len() != dims[k]) {
                return Err(Error::Dimension(format!("boundary in degree {k} has {} columns", cols.len())));
            }
            if cols.iter().flatten().any(|&(r, _)| r >= rows) {
                return Err(Error::Dimension(format!("boundary in degree {k} has a row out of range")));
            }
        }
        Ok(ChainComplex { dims, boundary })
    }

    /// Normalized chains of the nerve, in every degree the nerve has.
    pub fn from_nerve(cat: &AcyclicCategory, nerve: &Nerve) -> Self {
        let dims: Vec<usize> = (0..=nerve.top()).map(|k| nerve.count(k)).collect();
        let mut boundary = vec![Vec::new()];
        for k in 1..=nerve.top() {
            boundary.push(nerve.boundary(cat, k));
        }
        ChainComplex { dims, boundary }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn apply_boundary(&self, k: usize, chain: &[i64]) -> Result<Vec<i64>> {
        if k == 0 || k > self.top() {
            return Ok(vec![0; if k == 0 { 0 } else { self.dim(k - 1) }]);
        }
        let mut out = vec![0i64; self.dims[k - 1]];
        for (e, col) in self.boundary[k].iter().enumerate() {
            if chain[e] == 0 {
                continue;
            }
            for &(r, c) in col {
                out[r] = add(out[r], mul(c, chain[e])?)?;
            }
        }
        Ok(out)
    }

    /// `(δc)(σ) = c(∂σ)` for `c ∈ C^k`, a cochain of degree `k + 1`.
    pub fn apply_coboundary(&self, k: usize, cochain: &[i64]) -> Result<Vec<i64>> {
        if k + 1 > self.top() {
            return Ok(Vec::new());
        }
        self.boundary[k + 1]
            .iter()
            .map(|col| col.iter().try_fold(0i64, |acc, &(r, c)| add(acc, mul(c, cochain[r])?)))
            .collect()
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for k in 2..=self.top() {
            for (e, col) in self.boundary[k].iter().enumerate() {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(r, c) in col {
                    for &(s, c2) in &self.boundary[k - 1][r] {
                        let v = acc.entry(s).or_insert(0);
                        *v = add(*v, mul(c, c2)?)?;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return Err(Error::Check(format!("∂∂ ≠ 0 on generator {e} of degree {k}")));
                }
            }
        }
        Ok(())
    }

    /// The cochain complex read as a chain complex: degree `j` is `C^{top−j}`.
    pub fn dual(&self) -> ChainComplex {
        let top = self.top();
        let dims: Vec<usize> = (0..=top).map(|j| self.dims[top - j]).collect();
        let mut boundary = vec![Vec::new()];
        for j in 1..=top {
            // ∂^D_j = (∂_{top−j+1})ᵀ : C^{top−j} → C^{top−j+1}.
            let src = &self.boundary[top - j + 1];
            let mut cols: Vec<SparseCol> = vec![Vec::new(); dims[j]];
            for (e, col) in src.iter().enumerate() {
                for &(r, c) in col {
                    cols[r].push((e, c));
                }
            }
            boundary.push(cols);
        }
        ChainComplex { dims, boundary }
    }

    pub fn homology(&self) -> Result<Homology> {
        let top = self.top();
        let cyc = reduced_cycles(self)?;
        let cocyc = reduced_cycles(&self.dual())?;
        let mut groups = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let (betti, torsion, cycles) = cyc[k].clone();
            let cocycles = cocyc[top - k].2.clone();
            if cocycles.len() != betti {
                return Err(Error::Check(format!("rank of H^{k} differs from rank of H_{k}")));
            }
            let cocycles = rebase_dual(&cycles, cocycles)?;
            groups.push(HomologyGroup { degree: k, betti, torsion, cycles, cocycles });
        }
        Ok(Homology { groups })
    }
}

/// `H_k` together with a basis of its free part and a dual basis of `H^k` modulo torsion.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    pub cycles: Vec<Vec<i64>>,
    /// `⟨cocycles[i], cycles[j]⟩ = δ_ij`.
    pub cocycles: Vec<Vec<i64>>,
}

impl HomologyGroup {
    /// Coordinates of a cocycle's class in the dual basis.
    pub fn cocycle_class(&self, c: &[i64]) -> Result<Vec<i64>> {
        self.cycles.iter().map(|z| pair(c, z)).collect()
    }

    /// Coordinates of a cycle's class in the cycle basis, modulo torsion.
    pub fn cycle_class(&self, z: &[i64]) -> Result<Vec<i64>> {
        self.cocycles.iter().map(|c| pair(c, z)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Homology {
    pub groups: Vec<HomologyGroup>,
}

impl Homology {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }
}

/// Replace `cocycles` by the combinations pairing to the identity with `cycles`.
fn rebase_dual(cycles: &[Vec<i64>], cocycles: Vec<Vec<i64>>) -> Result<Vec<Vec<i64>>> {
    let b = cycles.len();
    if b == 0 {
        return Ok(cocycles);
    }
    let mut p = IntMatrix::zeros(b, b);
    for i in 0..b {
        for j in 0..b {
            p[(i, j)] = pair(&cocycles[i], &cycles[j])?.into();
        }
    }
    let s = smith_normal_form(&p);
    if s.diagonal().iter().any(|d| !d.is_one()) {
        return Err(Error::Check("cycle and cocycle bases do not pair unimodularly".into()));
    }
    // U P V = I, so P⁻¹ = V U.
    let x = s.v.mul(&s.u);
    let n = cocycles[0].len();
    let mut out = vec![vec![0i64; n]; b];
    for i in 0..b {
        for l in 0..b {
            let f = small(&x[(i, l)])?;
            if f == 0 {
                continue;
            }
            for e in 0..n {
                out[i][e] = add(out[i][e], mul(f, cocycles[l][e])?)?;
            }
        }
    }
    Ok(out)
}

/// Working state of the unit-pivot elimination.
struct Reducer {
    alive: Vec<Vec<bool>>,
    cols: Vec<Vec<BTreeMap<usize, i64>>>,
    /// `rows[k][r]`: generators of `C_k` whose boundary involves `r ∈ C_{k−1}`.
    rows: Vec<Vec<BTreeSet<usize>>>,
    /// Original chain represented by each generator.
    lift: Vec<Vec<BTreeMap<usize, i64>>>,
}

impl Reducer {
    fn new(cx: &ChainComplex) -> Self {
        let top = cx.top();
        let alive = cx.dims.iter().map(|&n| vec![true; n]).collect();
        let mut cols = vec![Vec::new()];
        let mut rows = vec![Vec::new()];
        for k in 1..=top {
            let mut r = vec![BTreeSet::new(); cx.dims[k - 1]];
            let c: Vec<BTreeMap<usize, i64>> = cx.boundary[k]
                .iter()
                .enumerate()
                .map(|(e, col)| {
                    let mut m = BTreeMap::new();
                    for &(i, v) in col {
                        if v != 0 {
                            *m.entry(i).or_insert(0) += v;
                            r[i].insert(e);
                        }
                    }
                    m
                })
                .collect();
            cols.push(c);
            rows.push(r);
        }
        let lift = cx.dims.iter().map(|&n| (0..n).map(|e| BTreeMap::from([(e, 1i64)])).collect()).collect();
        Reducer { alive, cols, rows, lift }
    }

    fn eliminate(&mut self, k: usize, sigma: usize, tau: usize) -> Result<()> {
        let a = self.cols[k][sigma][&tau];
        debug_assert!(a.abs() == 1);
        let col_s = self.cols[k][sigma].clone();
        let lift_s = self.lift[k][sigma].clone();
        let others: Vec<usize> = self.rows[k][tau].iter().copied().filter(|&e| e != sigma).collect();
        for e in others {
            let f = mul(self.cols[k][e][&tau], a)?;
            for (&r, &v) in &col_s {
                let entry = self.cols[k][e].entry(r).or_insert(0);
                *entry = add(*entry, mul(-f, v)?)?;
                if *entry == 0 {
                    self.cols[k][e].remove(&r);
                    self.rows[k][r].remove(&e);
                } else {
                    self.rows[k][r].insert(e);
                }
            }
            for (&r, &v) in &lift_s {
                let entry = self.lift[k][e].entry(r).or_insert(0);
                *entry = add(*entry, mul(-f, v)?)?;
                if *entry == 0 {
                    self.lift[k][e].remove(&r);
                }
            }
        }
        for r in col_s.keys() {
            self.rows[k][*r].remove(&sigma);
        }
        self.cols[k][sigma].clear();
        self.alive[k][sigma] = false;
        self.alive[k - 1][tau] = false;
        debug_assert!(self.rows[k][tau].is_empty());
        if k >= 2 {
            let col_t = std::mem::take(&mut self.cols[k - 1][tau]);
            for r in col_t.keys() {
                self.rows[k - 1][*r].remove(&tau);
            }
        }
        // The σ-coordinate of every boundary from degree k+1 vanishes in the new basis.
        if k < self.cols.len() - 1 {
            for e in std::mem::take(&mut self.rows[k + 1][sigma]) {
                self.cols[k + 1][e].remove(&sigma);
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        let top = self.alive.len() - 1;
        loop {
            let mut changed = false;
            for k in 1..=top {
                let mut order: Vec<usize> = (0..self.alive[k].len()).filter(|&e| self.alive[k][e]).collect();
                order.sort_by_key(|&e| (self.cols[k][e].len(), e));
                for sigma in order {
                    if !self.alive[k][sigma] {
                        continue;
                    }
                    let pivot = self.cols[k][sigma]
                        .iter()
                        .filter(|(_, v)| v.abs() == 1)
                        .map(|(&r, _)| r)
                        .min_by_key(|&r| (self.rows[k][r].len(), r));
                    if let Some(tau) = pivot {
                        self.eliminate(k, sigma, tau)?;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

type DegreeResult = (usize, Vec<BigInt>, Vec<Vec<i64>>);

/// Betti number, torsion and free cycle representatives in every degree.
fn reduced_cycles(cx: &ChainComplex) -> Result<Vec<DegreeResult>> {
    let top = cx.top();
    let mut red = Reducer::new(cx);
    red.run()?;
    let survivors: Vec<Vec<usize>> =
        red.alive.iter().map(|a| (0..a.len()).filter(|&e| a[e]).collect()).collect();
    let pos: Vec<BTreeMap<usize, usize>> =
        survivors.iter().map(|s| s.iter().enumerate().map(|(i, &e)| (e, i)).collect()).collect();
    let dense = |k: usize| -> IntMatrix {
        // ∂_k between survivors; k = 0 and k = top + 1 give empty maps.
        let rows = if k == 0 { 0 } else { survivors[k - 1].len() };
        let cols = if k > top { 0 } else { survivors[k].len() };
        let mut m = IntMatrix::zeros(rows, cols);
        if k >= 1 && k <= top {
            for (j, &e) in survivors[k].iter().enumerate() {
                for (&r, &v) in &red.cols[k][e] {
                    m[(pos[k - 1][&r], j)] = v.into();
                }
            }
        }
        m
    };
    let mut out = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let n = survivors[k].len();
        let a = dense(k);
        let (r, v, v_inv) = if a.rows() == 0 {
            (0, IntMatrix::identity(n), IntMatrix::identity(n))
        } else {
            let s = smith_normal_form(&a);
            (s.rank, s.v, s.v_inv)
        };
        let b = dense(k + 1);
        let vb = v_inv.mul(&b);
        let mut c = IntMatrix::zeros(n - r, b.cols());
        for i in r..n {
            for j in 0..b.cols() {
                c[(i - r, j)] = vb[(i, j)].clone();
            }
        }
        let sc = smith_normal_form(&c);
        let torsion = sc.torsion();
        let betti = n - r - sc.rank;
        let mut cycles = Vec::with_capacity(betti);
        for j in sc.rank..n - r {
            // Column j of K·U_c⁻¹ with K = V[:, r..].
            let mut z = vec![0i64; cx.dims[k]];
            for (i, &e) in survivors[k].iter().enumerate() {
                let mut coeff = BigInt::zero();
                for l in 0..n - r {
                    coeff += &v[(i, r + l)] * &sc.u_inv[(l, j)];
                }
                let coeff = small(&coeff)?;
                if coeff == 0 {
                    continue;
                }
                for (&o, &w) in &red.lift[k][e] {
                    z[o] = add(z[o], mul(coeff, w)?)?;
                }
            }
            cycles.push(z);
        }
        out.push((betti, torsion.into_iter().map(|t| t.abs()).collect(), cycles));
    }
    Ok(out)
}

/// Values of a cochain on a chain of morphisms: the Alexander–Whitney cup product.
pub fn cup(cat: &AcyclicCategory, nerve: &Nerve, a: &[i64], p: usize, b: &[i64], q: usize) -> Result<Vec<i64>> {
    let n = p + q;
    if n > nerve.top() {
        return Ok(Vec::new());
    }
    nerve.simplices[n]
        .iter()
        .map(|s| {
            let verts = Nerve::vertices(cat, s);
            let front = match (s, p) {
                (_, 0) => Simplex::Vertex(verts[0]),
                (Simplex::Chain(ms), _) => Simplex::Chain(ms[..p].to_vec()),
                _ => unreachable!(),
            };
            let back = match (s, q) {
                (_, 0) => Simplex::Vertex(verts[n]),
                (Simplex::Chain(ms), _) => Simplex::Chain(ms[p..].to_vec()),
                _ => unreachable!(),
            };
            let x = a[nerve.index_of(p, &front).expect("front faces are simplices")];
            if x == 0 {
                return Ok(0);
            }
            mul(x, b[nerve.index_of(q, &back).expect("back faces are simplices")])
        })
        .collect()
}

/// `f*(c)` for a simplex map `map[σ] = f(σ)`, degenerate images giving zero.
pub fn pullback(map: &[Option<usize>], cochain: &[i64]) -> Vec<i64> {
    map.iter().map(|m| m.map_or(0, |t| cochain[t])).collect()
}

/// `f_*(z)` for a simplex map into a complex of rank `n`.
pub fn pushforward(map: &[Option<usize>], n: usize, chain: &[i64]) -> Result<Vec<i64>> {
    let mut out = vec![0i64; n];
    for (s, &c) in chain.iter().enumerate() {
        if let Some(t) = map[s] {
            out[t] = add(out[t], c)?;
        }
    }
    Ok(out)
}

pub fn is_zero(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn scale_add(acc: &mut [i64], f: i64, v: &[i64]) -> Result<()> {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = add(*a, mul(f, x)?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use proptest::prelude::*;

    use super::*;

    /// Simplicial chain complex of a complex given by its facets (all faces included).
    fn simplicial(facets: &[Vec<usize>]) -> (ChainComplex, Vec<Vec<Vec<usize>>>) {
        let mut faces: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for f in facets {
            let n = f.len();
            for mask in 1u32..(1 << n) {
                let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                let k = s.len() - 1;
                if faces.len() <= k {
                    faces.resize(k + 1, BTreeSet::new());
                }
                faces[k].insert(s);
            }
        }
        let lists: Vec<Vec<Vec<usize>>> = faces.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Vec<usize>, usize>> =
            lists.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        let mut boundary = vec![Vec::new()];
        for k in 1..lists.len() {
            boundary.push(
                lists[k]
                    .iter()
                    .map(|s| {
                        let mut col: SparseCol = (0..=k)
                            .map(|i| {
                                let mut t = s.clone();
                                t.remove(i);
                                (index[k - 1][&t], if i % 2 == 0 { 1 } else { -1 })
                            })
                            .collect();
                        col.sort_unstable();
                        col
                    })
                    .collect(),
            );
        }
        let dims = lists.iter().map(Vec::len).collect();
        (ChainComplex::new(dims, boundary).unwrap(), lists)
    }

    /// Dense homology by one Smith form per map, no reduction: the second route.
    fn naive_homology(cx: &ChainComplex) -> Vec<(usize, Vec<BigInt>)> {
        let mat = |k: usize| -> IntMatrix {
            let rows = if k == 0 { 0 } else { cx.dim(k - 1) };
            let mut m = IntMatrix::zeros(rows, cx.dim(k));
            if k >= 1 && k <= cx.top() {
                for (j, col) in cx.boundary[k].iter().enumerate() {
                    for &(r, v) in col {
                        m[(r, j)] = v.into();
                    }
                }
            }
            m
        };
        (0..=cx.top())
            .map(|k| {
                let rk = |m: &IntMatrix| if m.rows() == 0 || m.cols() == 0 { 0 } else { smith_normal_form(m).rank };
                let b = mat(k + 1);
                let tors = if b.rows() == 0 || b.cols() == 0 { Vec::new() } else { smith_normal_form(&b).torsion() };
                (cx.dim(k) - rk(&mat(k)) - rk(&b), tors)
            })
            .collect()
    }

    fn triangulated_torus() -> Vec<Vec<usize>> {
        // 3×3 grid with opposite sides identified.
        let v = |i: usize, j: usize| (i % 3) * 3 + (j % 3);
        let mut f = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let mut a = vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)];
                let mut b = vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)];
                a.sort_unstable();
                b.sort_unstable();
                f.push(a);
                f.push(b);
            }
        }
        f
    }

    fn projective_plane() -> Vec<Vec<usize>> {
        // The six-vertex triangulation.
        [[0, 1, 3], [0, 1, 5], [0, 2, 3], [0, 2, 4], [0, 4, 5], [1, 2, 4], [1, 2, 5], [1, 3, 4], [2, 3, 5], [3, 4, 5]]
            .iter()
            .map(|f| {
                let mut v = f.to_vec();
                v.sort_unstable();
                v
            })
            .collect()
    }

    #[test]
    fn torus_and_projective_plane() {
        let (t, _) = simplicial(&triangulated_torus());
        t.check_d_squared().unwrap();
        let h = t.homology().unwrap();
        assert_eq!(h.betti(), vec![1, 2, 1]);
        assert!(h.is_torsion_free());
        let (p, _) = simplicial(&projective_plane());
        let h = p.homology().unwrap();
        assert_eq!(h.betti(), vec![1, 0, 0]);
        assert_eq!(h.groups[1].torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn representatives_are_cycles_and_dual() {
        let (t, _) = simplicial(&triangulated_torus());
        let h = t.homology().unwrap();
        for g in &h.groups {
            for z in &g.cycles {
                assert!(is_zero(&t.apply_boundary(g.degree, z).unwrap()));
            }
            for c in &g.cocycles {
                assert!(is_zero(&t.apply_coboundary(g.degree, c).unwrap()));
            }
            for (i, c) in g.cocycles.iter().enumerate() {
                for (j, z) in g.cycles.iter().enumerate() {
                    assert_eq!(pair(c, z).unwrap(), (i == j) as i64);
                }
            }
        }
    }

    #[test]
    fn dual_of_dual_is_identity() {
        let (t, _) = simplicial(&projective_plane());
        let dd = t.dual().dual();
        assert_eq!(dd.dims, t.dims);
        for k in 1..=t.top() {
            let sorted: Vec<SparseCol> = dd.boundary[k]
                .iter()
                .map(|c| {
                    let mut c = c.clone();
                    c.sort_unstable();
                    c
                })
                .collect();
            assert_eq!(sorted, t.boundary[k]);
        }
    }

    fn random_complex() -> impl Strategy<Value = Vec<Vec<usize>>> {
        proptest::collection::vec(proptest::collection::btree_set(0usize..7, 1..=4), 1..9)
            .prop_map(|fs| fs.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn reduction_agrees_with_dense_smith(facets in random_complex()) {
            let (cx, _) = simplicial(&facets);
            let h = cx.homology().unwrap();
            let naive = naive_homology(&cx);
            for (g, (b, t)) in h.groups.iter().zip(&naive) {
                prop_assert_eq!(g.betti, *b);
                prop_assert_eq!(&g.torsion, t);
            }
            let chi: i64 = cx.dims.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
            let chi_h: i64 = h.betti().iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
            prop_assert_eq!(chi, chi_h);
        }

        #[test]
        fn universal_coefficients(facets in random_complex()) {
            // rank H^k = rank H_k, and torsion of H^{k+1} is that of H_k.
            let (cx, _) = simplicial(&facets);
            let h = cx.homology().unwrap();
            let co = cx.dual().homology().unwrap();
            let top = cx.top();
            for k in 0..=top {
                prop_assert_eq!(co.groups[top - k].betti, h.groups[k].betti);
                if k < top {
                    prop_assert_eq!(&co.groups[top - k - 1].torsion, &h.groups[k].torsion);
                }
            }
        }
    }

    #[test]
    fn cup_product_on_nerve_of_torus_poset() {
        // Face poset of the triangulated torus, whose nerve is the barycentric subdivision.
        let (_, lists) = simplicial(&triangulated_torus());
        let mut cells: Vec<Vec<usize>> = lists.into_iter().flatten().collect();
        cells.sort_by_key(|c| (c.len(), c.clone()));
        let mut mors = Vec::new();
        for (i, a) in cells.iter().enumerate() {
            for (j, b) in cells.iter().enumerate() {
                if a.len() < b.len() && a.iter().all(|x| b.contains(x)) {
                    mors.push((i, j));
                }
            }
        }
        let mi: HashMap<(usize, usize), usize> = mors.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut compose = HashMap::new();
        for (f, &(a, b)) in mors.iter().enumerate() {
            for (g, &(b2, c)) in mors.iter().enumerate() {
                if b == b2 {
                    compose.insert((f, g), mi[&(a, c)]);
                }
            }
        }
        let cat = AcyclicCategory::new(cells.len(), mors, compose).unwrap();
        let nerve = Nerve::new(&cat, 3);
        let cx = ChainComplex::from_nerve(&cat, &nerve);
        let h = cx.homology().unwrap();
        assert_eq!(h.betti(), vec![1, 2, 1]);
        let (a, b) = (&h.groups[1].cocycles[0], &h.groups[1].cocycles[1]);
        let ab = cup(&cat, &nerve, a, 1, b, 1).unwrap();
        let ba = cup(&cat, &nerve, b, 1, a, 1).unwrap();
        let aa = cup(&cat, &nerve, a, 1, a, 1).unwrap();
        let cab = h.groups[2].cocycle_class(&ab).unwrap();
        let cba = h.groups[2].cocycle_class(&ba).unwrap();
        assert_eq!(cab[0].abs(), 1);
        assert_eq!(cab[0], -cba[0]);
        assert_eq!(h.groups[2].cocycle_class(&aa).unwrap(), vec![0]);
        // Leibniz: δ(a ⌣ f) = δa ⌣ f − a ⌣ δf for a 0-cochain f.
        let f: Vec<i64> = (0..cx.dims[0]).map(|i| (i % 5) as i64 - 2).collect();
        let lhs = cx.apply_coboundary(1, &cup(&cat, &nerve, a, 1, &f, 0).unwrap()).unwrap();
        let df = cx.apply_coboundary(0, &f).unwrap();
        let rhs: Vec<i64> = cup(&cat, &nerve, a, 1, &df, 1).unwrap().iter().map(|x| -x).collect();
        assert_eq!(lhs, rhs);
    }
}
