//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers ([`BigInt`]) or
//! rationals ([`BigRational`]). Normal forms are deterministic: the Smith
//! form always picks the nonzero entry of least absolute value as pivot,
//! ties broken by row index and then column index.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rational number alias used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`IntMatrix::from_rows`] but keeps the column count when there are no rows.
    pub fn from_rows_with_cols<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(BigInt::zero(), |acc, j| acc + &self[(i, j)] * &v[j]))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * c;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * c;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | …`, all `d_i ≥ 0`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| x > &BigInt::one()).collect()
    }
}

fn smallest_nonzero(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut ui = IntMatrix::identity(r);
    let mut vi = IntMatrix::identity(c);
    let mut t = 0;
    while t < r.min(c) {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        ui.swap_cols(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        vi.swap_rows(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let qt = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row(i, t, &qt);
                u.add_row(i, t, &qt);
                ui.add_col(t, i, &-&qt);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let qt = -a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col(j, t, &qt);
                v.add_col(j, t, &qt);
                vi.add_row(t, j, &-&qt);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                // Remainders are strictly smaller than the pivot: move the least one up.
                let mut best = (t, t);
                for i in t + 1..r {
                    if !a[(i, t)].is_zero() && a[(i, t)].abs() < a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    if !a[(t, j)].is_zero() && a[(t, j)].abs() < a[best].abs() {
                        best = (t, j);
                    }
                }
                if best.1 == t {
                    a.swap_rows(t, best.0);
                    u.swap_rows(t, best.0);
                    ui.swap_cols(t, best.0);
                } else {
                    a.swap_cols(t, best.1);
                    v.swap_cols(t, best.1);
                    vi.swap_rows(t, best.1);
                }
                continue;
            }
            let p = a[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                    ui.add_col(i, t, &-BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            ui.negate_col(t);
        }
        t += 1;
    }
    SmithDecomposition { u, d: a, v, u_inv: ui, v_inv: vi, rank: t }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·M = H`.
///
/// `H` is in row echelon form, pivots positive, entries above a pivot reduced
/// into `[0, pivot)`, zero rows last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (r, c) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in row..r {
                if !h[(i, col)].is_zero() && best.is_none_or(|b| h[(i, col)].abs() < h[(b, col)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(row, b);
            u.swap_rows(row, b);
            let mut done = true;
            for i in row + 1..r {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let qt = -h[(i, col)].div_floor(&h[(row, col)]);
                h.add_row(i, row, &qt);
                u.add_row(i, row, &qt);
                done &= h[(i, col)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(row, col)].is_zero() {
            continue;
        }
        if h[(row, col)].is_negative() {
            h.negate_row(row);
            u.negate_row(row);
        }
        for i in 0..row {
            let qt = -h[(i, col)].div_floor(&h[(row, col)]);
            h.add_row(i, row, &qt);
            u.add_row(i, row, &qt);
        }
        row += 1;
    }
    (h, u)
}

/// Outcome of [`solve_linear_integer`].
#[derive(Clone, Debug, PartialEq)]
pub enum IntegerSolve {
    /// A particular integer solution and a basis of the integer kernel.
    Integer { solution: Vec<BigInt>, kernel: Vec<Vec<BigInt>> },
    /// No integer solution; a particular rational solution and the integer kernel basis.
    RationalOnly { solution: Vec<Q>, kernel: Vec<Vec<BigInt>> },
    /// No solution even over the rationals.
    Inconsistent,
}

/// Solves `M·x = b` over the integers, falling back to the rationals.
pub fn solve_linear_integer(m: &IntMatrix, b: &[BigInt]) -> Result<IntegerSolve> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {} but the matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    if ub[snf.rank..].iter().any(|x| !x.is_zero()) {
        return Ok(IntegerSolve::Inconsistent);
    }
    let kernel: Vec<Vec<BigInt>> = (snf.rank..m.cols()).map(|j| snf.v.col(j)).collect();
    let integral = (0..snf.rank).all(|i| ub[i].is_multiple_of(&snf.d[(i, i)]));
    if integral {
        let mut y = vec![BigInt::zero(); m.cols()];
        for i in 0..snf.rank {
            y[i] = &ub[i] / &snf.d[(i, i)];
        }
        Ok(IntegerSolve::Integer { solution: snf.v.mul_vec(&y), kernel })
    } else {
        let mut y = vec![Q::zero(); m.cols()];
        for i in 0..snf.rank {
            y[i] = Q::new(ub[i].clone(), snf.d[(i, i)].clone());
        }
        let solution = (0..m.cols())
            .map(|i| (0..m.cols()).fold(Q::zero(), |acc, j| acc + Q::from_integer(snf.v[(i, j)].clone()) * &y[j]))
            .collect();
        Ok(IntegerSolve::RationalOnly { solution, kernel })
    }
}

/// Finite part of `Z^d / Λ` together with the dual picture used for torus translations.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAbelianGroup {
    /// Invariant factors `> 1` in divisibility order.
    pub torsion: Vec<BigInt>,
    /// Rank of the free part of `Z^d / Λ`.
    pub free_rank: usize,
    /// One angle vector in `[0,1)^d` per group element, identity first.
    ///
    /// Each `t` satisfies `⟨λ, t⟩ ∈ Z` for all `λ ∈ Λ`; distinct entries lie in
    /// distinct components of that subgroup of the compact torus.
    pub elements: Vec<Vec<Q>>,
    /// Generator of each cyclic factor, aligned with `torsion`.
    pub generators: Vec<Vec<Q>>,
}

impl FiniteAbelianGroup {
    pub fn order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, b| a * b)
    }
}

/// Torsion of `Z^d / span(rows of gens)` with coset representatives in angle coordinates.
pub fn quotient_group(gens: &IntMatrix, ambient_rank: usize) -> FiniteAbelianGroup {
    assert_eq!(gens.cols(), ambient_rank, "generators must live in Z^d");
    let snf = smith_normal_form(gens);
    let diag = snf.diagonal();
    let mut torsion = Vec::new();
    let mut generators = Vec::new();
    for (j, dj) in diag.iter().enumerate().take(snf.rank) {
        if dj > &BigInt::one() {
            torsion.push(dj.clone());
            generators.push(snf.v.col(j).iter().map(|x| frac(&Q::new(x.clone(), dj.clone()))).collect::<Vec<_>>());
        }
    }
    let mut elements = vec![vec![Q::zero(); ambient_rank]];
    for (g, n) in generators.iter().zip(&torsion) {
        let n: usize = n.try_into().expect("torsion coefficient too large to enumerate");
        let mut next = Vec::with_capacity(elements.len() * n);
        for e in &elements {
            for a in 0..n {
                let s = qi(a as i64);
                next.push(e.iter().zip(g).map(|(x, y)| frac(&(x + &s * y))).collect());
            }
        }
        elements = next;
    }
    FiniteAbelianGroup { torsion, free_rank: ambient_rank - snf.rank, elements, generators }
}

/// Reduced row echelon form over Q; returns the matrix and its pivot columns.
pub fn rref(rows: &[Vec<Q>], cols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of the right kernel `{x : A x = 0}` over Q.
pub fn kernel_q(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `A x = b` over Q, if any.
pub fn solve_q(rows: &[Vec<Q>], b: &[Q], cols: usize) -> Option<Vec<Q>> {
    let aug: Vec<Vec<Q>> = rows
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn rank_q(rows: &[Vec<Q>], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// Inverse of a square matrix over Q, if it is invertible.
pub fn inverse_q(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let aug: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Determinant over Q.
pub fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for i in c + 1..n {
            let f = &a[i][c] / &pivot;
            for j in c..n {
                let v = &f * &a[c][j];
                a[i][j] -= v;
            }
        }
    }
    det
}

/// Integer basis of the saturated lattice `{v ∈ Z^d : A v = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    (snf.rank..a.cols()).map(|j| snf.v.col(j)).collect()
}

/// gcd of the entries (nonnegative); zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Least common multiple of the denominators.
pub fn denominator_lcm(v: &[Q]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}
