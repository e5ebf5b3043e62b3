//! Generator classes of `H^*(Sal(A); Z)` and the local data they restrict to.
//!
//! Degree-one homology is spanned by the circles `λ̂^{M_i}` over the base
//! layers and the squares `ω̂_H`, one per hypertorus; the cohomology classes
//! `λ^{M_i}`, `ω_H` are the dual basis. Each layer `L` carries the
//! subcomplex `S_{L,F(L)}` with its own dual basis, and every class of the
//! ambient complex is read off in the monomial basis `λ^{N_I} ω_S` there.

mod chains;
mod choices;
mod omega;
mod table;
mod verify;

pub use chains::{add_term, boundary, scale, sub, Chain, Cycles, Lambda, LocalPath};
pub use choices::{format_sign, parse_sign, ChoiceSet, Choices};
pub use omega::OmegaSL;
pub use table::{canonical_cell, compare_tables, format_cell, parse_cell, Table, TableComparison, TableRow};
pub use verify::{coherent_chamber, run as verify, Check, Report, Status, Suite};

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::category::Simplex;
use crate::cohomology::Space;
use crate::error::{Error, Result};
use crate::hyperplane::{nbc_basis, Hyperplane, HyperplaneArrangement};
use crate::lattice::{inverse_q, rank_q, to_q, Q};
use crate::toric::ToricModel;

/// The subcomplex `S_{Y,F0}` for a layer `Y` and a face `F0` of `A_0` spanning `X_Y`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub layer: usize,
    pub face: usize,
    pub space: Space,
    /// Simplex maps into the ambient nerve, per degree.
    pub maps: Vec<Vec<Option<usize>>>,
    /// Restriction matrices from the ambient cohomology, per degree.
    pub restriction: Vec<Vec<Vec<Q>>>,
    local_morphism: HashMap<usize, usize>,
}

impl Piece {
    fn new(model: &ToricModel, sal: &Space, y: usize, f0: usize, top: usize) -> Result<Piece> {
        let sub = model.subcategory(y, f0)?;
        let (space, maps) = sub.space(sal, top)?;
        let restriction = (0..=top).map(|k| sal.restriction_matrix(&space, &maps[k], k)).collect::<Result<_>>()?;
        let local_morphism = sub
            .inclusion
            .morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.expect("inclusions are faithful"), i))
            .collect();
        Ok(Piece { layer: y, face: f0, space, maps, restriction, local_morphism })
    }

    /// The chain as a 1-chain of the piece's nerve, if it is supported there.
    pub fn chain(&self, z: &Chain) -> Option<Vec<i64>> {
        let mut v = vec![0i64; self.space.cells(1)];
        for (&m, &c) in z {
            let local = *self.local_morphism.get(&m)?;
            v[self.space.nerve.index_of(1, &Simplex::Chain(vec![local]))?] += c;
        }
        Some(v)
    }

    /// Restriction of an ambient class of degree `k`.
    pub fn restrict(&self, k: usize, x: &[Q]) -> Vec<Q> {
        mat_vec(&self.restriction[k], x)
    }
}

/// A 1-chain of `Sal(A)` as a vector on the nerve.
pub fn nerve_chain(sal: &Space, z: &Chain) -> Vec<i64> {
    let mut v = vec![0i64; sal.cells(1)];
    for (&m, &c) in z {
        v[m] += c;
    }
    v
}

pub(crate) fn mat_vec(m: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    m.iter().map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * b)).collect()
}

/// Columns become rows.
pub(crate) fn transpose(cols: &[Vec<Q>], rows: usize) -> Vec<Vec<Q>> {
    (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

/// Rows of the inverse of the matrix with the given columns: the dual basis.
fn dual_basis(cols: &[Vec<Q>], what: &str) -> Result<Vec<Vec<Q>>> {
    let n = cols.len();
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::Check(format!("{what}: {n} cycles in a space of dimension {}", cols.first().map_or(0, Vec::len))));
    }
    inverse_q(&transpose(cols, n)).ok_or_else(|| Error::Check(format!("{what}: the cycles are dependent in homology")))
}

/// A monomial `λ^{N_I} ω_S` of a local basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    /// Positions into `LocalBasis::n`.
    pub lambdas: Vec<usize>,
    /// Hypertori in the total order.
    pub omegas: Vec<usize>,
}

/// `𝔅_L` and the monomial bases of `H^*(S_{L,F(L)})`.
#[derive(Clone, Debug)]
pub struct LocalBasis {
    pub layer: usize,
    /// Index into `Generators::pieces`.
    pub piece: usize,
    /// `N_1(L), …, N_k(L)` with `k = dim L`.
    pub n: Vec<usize>,
    /// `A_L` in the total order.
    pub hypertori: Vec<usize>,
    /// Cycle classes of `λ̂^{N_h}_{B(L)}` then `ω̂_H`.
    pub hat: Vec<Vec<Q>>,
    /// Representatives of `ω̂_H` inside the piece, aligned with `hypertori`.
    pub omega_chains: Vec<Chain>,
    /// The dual basis: `λ^{N_h}_{B(L)}` then `ω_H(L)`.
    pub dual: Vec<Vec<Q>>,
    /// nbc sets of `A[L]` as hypertori, grouped by size.
    pub nbc: Vec<Vec<Vec<usize>>>,
    /// Monomial basis per degree.
    pub monomials: Vec<Vec<Monomial>>,
    /// Classes of the monomials per degree.
    pub monomial_classes: Vec<Vec<Vec<Q>>>,
    /// Inverse of the monomial matrix per degree.
    coordinates: Vec<Vec<Vec<Q>>>,
}

impl LocalBasis {
    /// Coordinates of a class of the piece in the monomial basis.
    pub fn coordinates(&self, k: usize, x: &[Q]) -> Vec<Q> {
        mat_vec(&self.coordinates[k], x)
    }

    pub fn lambda_count(&self) -> usize {
        self.n.len()
    }

    /// `λ^{N_h}_{B(L)}`.
    pub fn lambda(&self, h: usize) -> &[Q] {
        &self.dual[h]
    }

    /// `ω_H(L)` for the hypertorus `h ∈ A_L`.
    pub fn omega(&self, h: usize) -> Option<&[Q]> {
        let pos = self.hypertori.iter().position(|&x| x == h)?;
        Some(&self.dual[self.n.len() + pos])
    }
}

/// All generator data for one arrangement under fixed choices.
pub struct Generators<'a> {
    pub model: &'a ToricModel,
    pub choices: Choices,
    pub sal: Space,
    /// `M_1, …, M_d`.
    pub base: Vec<usize>,
    /// Cycle classes of `λ̂^{M_i}_{B(T)}` then `ω̂_H`.
    pub hat: Vec<Vec<Q>>,
    /// `λ^{M_i}` then `ω_H`.
    pub classes: Vec<Vec<Q>>,
    pub pieces: Vec<Piece>,
    /// One per layer.
    pub locals: Vec<LocalBasis>,
    piece_index: HashMap<(usize, usize), usize>,
}

impl<'a> Generators<'a> {
    pub fn new(model: &'a ToricModel, choices: Choices) -> Result<Generators<'a>> {
        let d = model.arrangement.dim;
        let sal = Space::new(model.salvetti.category.clone(), d)?;
        let jobs: Vec<(usize, usize)> = (0..model.layers.len())
            .flat_map(|y| model.linear.faces.faces_spanning(&model.x_layer(y)).into_iter().map(move |f| (y, f)))
            .collect();
        let pieces = jobs
            .par_iter()
            .map(|&(y, f)| Piece::new(model, &sal, y, f, d))
            .collect::<Result<Vec<_>>>()?;
        let piece_index = pieces.iter().enumerate().map(|(i, p)| ((p.layer, p.face), i)).collect();
        let mut gen = Generators {
            model,
            choices,
            sal,
            base: Vec::new(),
            hat: Vec::new(),
            classes: Vec::new(),
            pieces,
            locals: Vec::new(),
            piece_index,
        };
        gen.base = gen.choose_base()?;
        let cycles = gen.cycles();
        let bt = gen.choices.base_chamber();
        let mut hat = Vec::new();
        for &m in &gen.base {
            hat.push(gen.sal.cycle_class(1, &nerve_chain(&gen.sal, &gen.lambda_hat(m, bt)?))?);
        }
        for h in 0..model.arrangement.len() {
            hat.push(gen.sal.cycle_class(1, &nerve_chain(&gen.sal, &cycles.omega_hat(h)?))?);
        }
        gen.classes = dual_basis(&hat, "global degree-one basis")?;
        gen.hat = hat;
        let locals = (0..model.layers.len()).map(|l| gen.local_basis(l)).collect::<Result<Vec<_>>>()?;
        gen.locals = locals;
        Ok(gen)
    }

    pub fn cycles(&self) -> Cycles<'_> {
        Cycles::new(self.model, &self.choices)
    }

    pub fn dim(&self) -> usize {
        self.model.arrangement.dim
    }

    /// `λ^{M_i}`.
    pub fn lambda(&self, i: usize) -> &[Q] {
        &self.classes[i]
    }

    /// `ω_H`.
    pub fn omega(&self, h: usize) -> &[Q] {
        &self.classes[self.dim() + h]
    }

    /// `ω_S = ω_{H_1} ⋯ ω_{H_r}` with `S` listed in the total order.
    pub fn omega_product(&self, s: &[usize]) -> Result<Vec<Q>> {
        let factors: Vec<Vec<Q>> = self.in_order(s).iter().map(|&h| self.omega(h).to_vec()).collect();
        self.sal.product(&factors)
    }

    /// The hypertori sorted by the total order.
    pub fn in_order(&self, s: &[usize]) -> Vec<usize> {
        let rank = self.model.arrangement.rank_in_order();
        let mut out = s.to_vec();
        out.sort_by_key(|&h| rank[h]);
        out
    }

    pub fn piece(&self, layer: usize, face: usize) -> Option<&Piece> {
        self.piece_index.get(&(layer, face)).map(|&i| &self.pieces[i])
    }

    /// Pieces `S_{Y,F0}` for every face `F0` spanning `X_Y`.
    pub fn pieces_of(&self, y: usize) -> impl Iterator<Item = &Piece> {
        self.pieces.iter().filter(move |p| p.layer == y)
    }

    /// `+1` when the winding of `Λ^M` has a positive leading coordinate.
    pub fn orientation(&self, m: usize) -> Result<i64> {
        let l = self.cycles().lambda(m, self.choices.base_chamber())?;
        let lead = l.winding.iter().find(|x| !x.is_zero()).ok_or_else(|| Error::Check("Λ has zero winding".into()))?;
        Ok(if lead.is_positive() { 1 } else { -1 })
    }

    /// `λ̂^M_B`: the circle `Λ^M_B` oriented so that its winding is lexicographically positive.
    pub fn lambda_hat(&self, m: usize, chamber: usize) -> Result<Chain> {
        let l = self.cycles().lambda(m, chamber)?;
        Ok(scale(&l.chain, self.orientation(m)?))
    }

    /// Winding of `λ̂^M` in `H_1(T) = Z^d`.
    pub fn winding(&self, m: usize) -> Result<Vec<BigInt>> {
        let l = self.cycles().lambda(m, self.choices.base_chamber())?;
        let s = BigInt::from(self.orientation(m)?);
        Ok(l.winding.iter().map(|x| x * &s).collect())
    }

    fn one_dim_layers(&self) -> Vec<usize> {
        (0..self.model.layers.len()).filter(|&l| self.model.layers.layers[l].dim() == 1).collect()
    }

    fn choose_base(&self) -> Result<Vec<usize>> {
        let d = self.dim();
        let rank_of = |ls: &[usize]| -> Result<usize> {
            let rows = ls.iter().map(|&m| Ok(to_q(&self.winding(m)?))).collect::<Result<Vec<_>>>()?;
            Ok(rank_q(&rows, d))
        };
        if !self.choices.base.is_empty() {
            if rank_of(&self.choices.base)? != d {
                return Err(Error::Input("the chosen base layers have dependent windings".into()));
            }
            return Ok(self.choices.base.clone());
        }
        let mut base = Vec::new();
        for m in self.one_dim_layers() {
            base.push(m);
            if rank_of(&base)? < base.len() {
                base.pop();
            }
            if base.len() == d {
                return Ok(base);
            }
        }
        Err(Error::Check("the one-dimensional layers do not span H_1(T)".into()))
    }

    /// `ω̂_H` inside `S_{L,F(L)}`: a square over a face of `L` open in `L`.
    fn local_omega(&self, l: usize, h: usize, piece: &Piece) -> Result<Chain> {
        let model = self.model;
        let fc = &model.faces;
        let dim = model.layers.layers[l].dim();
        let cycles = self.cycles();
        for f in model.faces_in_layer(l) {
            if fc.faces[f].dim != dim || fc.faces[f].support != l {
                continue;
            }
            for m in fc.from(f) {
                if cycles.support_hypertorus(fc.morphisms[m].tgt) != Some(h) {
                    continue;
                }
                let z = cycles.omega(m)?;
                if piece.chain(&z).is_some() {
                    return Ok(z);
                }
            }
        }
        Err(Error::Check(format!("no square of {} lies over {}", model.arrangement.hypertori[h].name, model.layers.layers[l].name)))
    }

    fn local_basis(&self, l: usize) -> Result<LocalBasis> {
        let model = self.model;
        let layer = &model.layers.layers[l];
        let name = &layer.name;
        let bl = self.choices.b[l];
        let pi = self.piece_index[&(l, self.choices.f[l])];
        let piece = &self.pieces[pi];
        let space = &piece.space;
        let hypertori = self.in_order(&layer.hypertori);
        let mut omega_chains = Vec::new();
        let mut omega_hat = Vec::new();
        for &h in &hypertori {
            let z = self.local_omega(l, h, piece)?;
            omega_hat.push(space.cycle_class(1, &piece.chain(&z).expect("checked in local_omega"))?);
            omega_chains.push(z);
        }
        let lambda_class = |m: usize| -> Result<Vec<Q>> {
            let z = self.lambda_hat(m, bl)?;
            let v = piece.chain(&z).ok_or_else(|| Error::Check(format!("Λ does not lie in the subcomplex of {name}")))?;
            space.cycle_class(1, &v)
        };
        let k = layer.dim();
        let n = match (&self.choices.n[l], l) {
            (Some(ns), _) => ns.clone(),
            (None, 0) => self.base.clone(),
            (None, _) => {
                let mut chosen: Vec<usize> = Vec::new();
                let mut cols = omega_hat.clone();
                for m in self.one_dim_layers() {
                    if chosen.len() == k {
                        break;
                    }
                    if !model.layers.leq(l, m) {
                        continue;
                    }
                    cols.push(lambda_class(m)?);
                    if rank_q(&cols, space.betti(1)) == cols.len() {
                        chosen.push(m);
                    } else {
                        cols.pop();
                    }
                }
                chosen
            }
        };
        if n.len() != k {
            return Err(Error::Check(format!("{name} has {} independent circles, expected {k}", n.len())));
        }
        let mut hat = n.iter().map(|&m| lambda_class(m)).collect::<Result<Vec<_>>>()?;
        hat.extend(omega_hat);
        let dual = dual_basis(&hat, &format!("basis of {name}"))?;
        // nbc sets of A[L], with hyperplanes listed as the hypertori of A_L in the total order.
        let arr = HyperplaneArrangement::new(
            self.dim(),
            hypertori.iter().map(|&h| Hyperplane::linear(to_q(&model.arrangement.hypertori[h].chi))).collect(),
        )?;
        let ordering: Vec<usize> = (0..hypertori.len()).collect();
        let nbc: Vec<Vec<Vec<usize>>> = nbc_basis(&arr, &ordering)?
            .into_iter()
            .map(|level| level.into_iter().map(|s| s.into_iter().map(|p| hypertori[p]).collect()).collect())
            .collect();
        let top = self.dim();
        let mut monomials = vec![Vec::new(); top + 1];
        let mut monomial_classes = vec![Vec::new(); top + 1];
        let mut coordinates = Vec::with_capacity(top + 1);
        for (deg, (monos, classes)) in monomials.iter_mut().zip(monomial_classes.iter_mut()).enumerate() {
            for (size, level) in nbc.iter().enumerate() {
                if size > deg || deg - size > k {
                    continue;
                }
                for lambdas in subsets(k, deg - size) {
                    for s in level {
                        let mut factors: Vec<Vec<Q>> = lambdas.iter().map(|&i| dual[i].clone()).collect();
                        for &h in s {
                            let pos = hypertori.iter().position(|&x| x == h).expect("nbc sets lie in A_L");
                            factors.push(dual[k + pos].clone());
                        }
                        classes.push(space.product(&factors)?);
                        monos.push(Monomial { lambdas: lambdas.clone(), omegas: s.clone() });
                    }
                }
            }
            let b = space.betti(deg);
            if classes.len() != b {
                return Err(Error::Check(format!("{name}: {} monomials in degree {deg}, Betti number {b}", classes.len())));
            }
            coordinates.push(dual_basis(classes, &format!("monomials of {name} in degree {deg}"))?.iter().map(|r| r.to_vec()).collect());
        }
        Ok(LocalBasis { layer: l, piece: pi, n, hypertori, hat, omega_chains, dual, nbc, monomials, monomial_classes, coordinates })
    }

    /// `φ_L^*` in degree `k`, in the monomial coordinates of `L`.
    pub fn restrict_to_layer(&self, l: usize, k: usize, x: &[Q]) -> Vec<Q> {
        let lb = &self.locals[l];
        lb.coordinates(k, &self.pieces[lb.piece].restrict(k, x))
    }

    /// Name of a monomial, e.g. `lambda^H2.omega_H2`.
    pub fn monomial_name(&self, l: usize, m: &Monomial) -> String {
        let lb = &self.locals[l];
        let mut parts: Vec<String> = m.lambdas.iter().map(|&i| format!("lambda^{}", self.model.layers.layers[lb.n[i]].name)).collect();
        parts.extend(m.omegas.iter().map(|&h| format!("omega_{}", self.model.arrangement.hypertori[h].name)));
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(".")
        }
    }
}

/// Sorted `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cohomology::unit_vector;
    use crate::lattice::qi;
    use crate::toric::tests::example;

    /// The choices of the worked example: `B(H2) = B1`, `B(L) = B0` otherwise, `R_H = B(H)`.
    pub fn table_choices() -> ChoiceSet {
        let mut set = ChoiceSet::default();
        for name in ["T", "H0", "H1", "P", "Q"] {
            set.b.insert(name.into(), "-++".into());
        }
        set.b.insert("H2".into(), "--+".into());
        for name in ["H0", "H1"] {
            set.r.insert(name.into(), "-++".into());
        }
        set.r.insert("H2".into(), "--+".into());
        set.base_layers = vec!["H0".into(), "H2".into()];
        set
    }

    pub fn example_model() -> ToricModel {
        ToricModel::new(example()).unwrap()
    }

    pub fn with_table_choices(model: &ToricModel) -> Generators<'_> {
        let choices = Choices::resolve(model, &table_choices()).unwrap();
        Generators::new(model, choices).unwrap()
    }

    #[test]
    fn global_basis_is_dual() {
        let model = example_model();
        let g = with_table_choices(&model);
        assert_eq!(g.sal.bettis(2), vec![1, 5, 7]);
        for (i, x) in g.classes.iter().enumerate() {
            let row: Vec<Q> = g.hat.iter().map(|z| x.iter().zip(z).fold(Q::zero(), |a, (p, q)| a + p * q)).collect();
            assert_eq!(row, unit_vector(5, i));
        }
        let names: Vec<&str> = g.base.iter().map(|&m| model.layers.layers[m].name.as_str()).collect();
        assert_eq!(names, ["H0", "H2"]);
    }

    #[test]
    fn local_bases_have_the_product_dimension() {
        let model = example_model();
        let g = with_table_choices(&model);
        for lb in &g.locals {
            let layer = &model.layers.layers[lb.layer];
            let b1 = g.pieces[lb.piece].space.betti(1);
            assert_eq!(b1, layer.dim() + layer.hypertori.len());
            assert_eq!(lb.dual.len(), b1);
        }
        // At P the local arrangement is three lines: 1 + 3t + 2t².
        let p = model.layers.by_name("P").unwrap();
        let lb = &g.locals[p];
        let counts: Vec<usize> = lb.monomials.iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 3, 2]);
        assert!(lb.monomials[2].iter().all(|m| m.omegas.contains(&2)), "H2 is first in the order, so every nbc pair contains it");
    }

    #[test]
    fn default_base_is_greedy() {
        let model = example_model();
        let g = Generators::new(&model, Choices::resolve(&model, &ChoiceSet::default()).unwrap()).unwrap();
        assert_eq!(g.base.len(), 2);
        let w: Vec<Vec<BigInt>> = g.base.iter().map(|&m| g.winding(m).unwrap()).collect();
        assert!(w.iter().all(|v| v.iter().find(|x| !x.is_zero()).unwrap().is_positive()));
        assert_ne!(w[0], w[1]);
        assert_eq!(g.locals[0].coordinates(0, &g.sal.unit().unwrap()), vec![qi(1)]);
    }
}
