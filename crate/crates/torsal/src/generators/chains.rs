//! Integral 1-cycles on `∫D`: the circles `Λ^M_B`, the squares `Ξ(H;B,P)`
//! and `Ω^{(m)}`, and the basis-change identity relating them.
//!
//! A chain is a sparse map from non-identity morphisms of `∫D` to
//! coefficients; its boundary is `Σ c · (target − source)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::Choices;
use crate::error::{Error, Result};
use crate::hyperplane::{compose, negate, restrict, separators, SignVector};
use crate::toric::ToricModel;

pub type Chain = BTreeMap<usize, i64>;

pub fn add_term(chain: &mut Chain, m: usize, c: i64) {
    let v = chain.entry(m).or_insert(0);
    *v += c;
    if *v == 0 {
        chain.remove(&m);
    }
}

pub fn sub(a: &Chain, b: &Chain) -> Chain {
    let mut out = a.clone();
    for (&m, &c) in b {
        add_term(&mut out, m, -c);
    }
    out
}

pub fn scale(a: &Chain, k: i64) -> Chain {
    a.iter().filter(|_| k != 0).map(|(&m, &c)| (m, c * k)).collect()
}

/// Boundary as a sparse map on objects.
pub fn boundary(model: &ToricModel, z: &Chain) -> BTreeMap<usize, i64> {
    let mut out = BTreeMap::new();
    for (&m, &c) in z {
        let (s, t, _) = model.salvetti.morphisms[m];
        add_term(&mut out, t, c);
        add_term(&mut out, s, -c);
    }
    out
}

/// The path of one face `F ⊆ M`: local chambers and the walls between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPath {
    pub face: usize,
    /// `C_i^F` on `A[F]`.
    pub vertices: Vec<SignVector>,
    /// `W_i^F`, the wall between `C_i^F` and `C_{i+1}^F`.
    pub walls: Vec<SignVector>,
}

impl LocalPath {
    /// Position of the wall whose zero is the local hyperplane at `pos`.
    pub fn wall_at(&self, pos: usize) -> Option<usize> {
        self.walls.iter().position(|w| w[pos] == 0)
    }
}

/// Chain-level constructions for one arrangement under fixed choices.
pub struct Cycles<'a> {
    pub model: &'a ToricModel,
    pub choices: &'a Choices,
    /// A replacement minimal gallery for one layer.
    gallery_override: Option<(usize, Vec<usize>)>,
}

/// `Λ^M_B` with the data used to build it.
#[derive(Clone, Debug)]
pub struct Lambda {
    pub layer: usize,
    pub chamber: usize,
    pub chain: Chain,
    /// Image of the cycle in `H_1(T) = Z^d`.
    pub winding: Vec<BigInt>,
    /// Vertices `P_0, P_1, …` in traversal order.
    pub vertices: Vec<usize>,
}

impl<'a> Cycles<'a> {
    pub fn new(model: &'a ToricModel, choices: &'a Choices) -> Self {
        Cycles { model, choices, gallery_override: None }
    }

    /// Use `gallery` in place of the default for the layer `m`. It must be a
    /// minimal gallery from `R_M` to `op_{X_M}(-R_M)`.
    pub fn with_gallery(mut self, m: usize, gallery: Vec<usize>) -> Result<Self> {
        let default = self.gallery(m)?;
        let fp = &self.model.linear.faces;
        let ok = gallery.first() == default.first()
            && gallery.last() == default.last()
            && gallery.len() == default.len()
            && gallery.windows(2).all(|w| separators(fp.sign(w[0]), fp.sign(w[1])).len() == 1);
        if !ok {
            return Err(Error::Input("not a minimal gallery between the same chambers".into()));
        }
        self.gallery_override = Some((m, gallery));
        Ok(self)
    }

    fn sign(&self, f: usize) -> &SignVector {
        self.model.linear.faces.sign(f)
    }

    fn r_m(&self, m: usize) -> Result<usize> {
        self.choices.r_layer[m]
            .ok_or_else(|| Error::Input(format!("{} is not a one-dimensional layer", self.model.layers.layers[m].name)))
    }

    /// The trace `ρ` of `R_M` on `X_M`.
    fn rho(&self, m: usize) -> Result<SignVector> {
        let mut s = self.sign(self.r_m(m)?).clone();
        for z in self.model.x_layer(m) {
            s[z] = 0;
        }
        Ok(s)
    }

    /// Minimal gallery from `R_M` to `op_{X_M}(-R_M)`, as chambers of `A_0`.
    pub fn gallery(&self, m: usize) -> Result<Vec<usize>> {
        if let Some((mm, g)) = &self.gallery_override {
            if *mm == m {
                return Ok(g.clone());
            }
        }
        let fp = &self.model.linear.faces;
        let r = self.r_m(m)?;
        let neg = fp.index_of(&negate(fp.sign(r))).expect("negatives of chambers are chambers");
        let target = fp.opposite_chamber(neg, &self.model.x_layer(m))?;
        Ok(fp.minimal_gallery(r, target))
    }

    pub fn local_path(&self, m: usize, face: usize) -> Result<LocalPath> {
        let local = &self.model.faces.faces[face].local;
        let mut vertices: Vec<SignVector> = Vec::new();
        for c in self.gallery(m)? {
            let v = restrict(self.sign(c), local);
            if vertices.last() != Some(&v) {
                vertices.push(v);
            }
        }
        let walls = vertices
            .windows(2)
            .map(|w| {
                let diff = separators(&w[0], &w[1]);
                debug_assert_eq!(diff.len(), 1, "consecutive local chambers differ in one wall");
                let mut s = w[0].clone();
                s[diff[0]] = 0;
                s
            })
            .collect();
        Ok(LocalPath { face, vertices, walls })
    }

    /// The object `(F, [g, c])` for local sign vectors.
    pub fn object(&self, face: usize, g: &[i8], c: &[i8]) -> Result<usize> {
        let local = self.model.local(face);
        let gi = local.faces.index_of(g).ok_or_else(|| Error::Check("sign vector is not a local face".into()))?;
        let ci = local.faces.index_of(c).ok_or_else(|| Error::Check("sign vector is not a local face".into()))?;
        let cell = local.sal.index_of(gi, ci).ok_or_else(|| Error::Check("pair is not a Salvetti cell".into()))?;
        Ok(self.model.salvetti.object(face, cell).expect("every cell is an object"))
    }

    /// The morphism `a → b` over the face morphism `fm`.
    pub fn arrow(&self, a: usize, b: usize, fm: usize) -> Result<usize> {
        self.model.salvetti.morphism(a, b, fm).ok_or_else(|| Error::Check(format!("no morphism {a} → {b}")))
    }

    fn inside(&self, face: usize, a: usize, b: usize) -> Result<usize> {
        self.arrow(a, b, self.model.faces.identity[face])
    }

    /// `v_i` and `e_i` objects of `Path(M;B,F)`.
    fn path_objects(&self, path: &LocalPath, b: &[i8]) -> Result<(Vec<usize>, Vec<usize>)> {
        let f = path.face;
        let vs = path.vertices.iter().map(|c| self.object(f, c, c)).collect::<Result<Vec<_>>>()?;
        let es = path.walls.iter().map(|w| self.object(f, w, &compose(b, w))).collect::<Result<Vec<_>>>()?;
        Ok((vs, es))
    }

    /// `Λ^M_B` with coefficient `+1` on `(v_0 → e_0)` at the first vertex.
    pub fn lambda(&self, m: usize, chamber: usize) -> Result<Lambda> {
        let model = self.model;
        let fc = &model.faces;
        if model.layers.layers[m].dim() != 1 {
            return Err(Error::Input(format!("{} is not one-dimensional", model.layers.layers[m].name)));
        }
        let in_m = model.faces_in_layer(m);
        let rho = self.rho(m)?;
        let minus_rho = negate(&rho);
        let b = self.sign(chamber).clone();
        let start = *in_m
            .iter()
            .find(|&&f| fc.faces[f].dim == 0)
            .ok_or_else(|| Error::Check("a one-dimensional layer has no vertex".into()))?;
        let mut chain = Chain::new();
        let mut winding = vec![BigInt::zero(); model.arrangement.dim];
        let mut vertices = Vec::new();
        let mut p = start;
        loop {
            if vertices.contains(&p) {
                return Err(Error::Check("traversal revisits a vertex before closing".into()));
            }
            vertices.push(p);
            let path = self.local_path(m, p)?;
            let local_b = restrict(&b, &fc.faces[p].local);
            let (vs, es) = self.path_objects(&path, &local_b)?;
            for (i, &e) in es.iter().enumerate() {
                add_term(&mut chain, self.inside(p, vs[i], e)?, 1);
                add_term(&mut chain, self.inside(p, vs[i + 1], e)?, -1);
            }
            // Leave along −ρ to an edge, then enter the next vertex along +ρ.
            let out = fc
                .from(p)
                .into_iter()
                .find(|&k| {
                    let mm = &fc.morphisms[k];
                    fc.faces[mm.tgt].dim == 1 && mm.fm == restrict(&minus_rho, &fc.faces[p].local) && in_m.contains(&mm.tgt)
                })
                .ok_or_else(|| Error::Check("no edge of the layer leaves the vertex along -ρ".into()))?;
            let g = fc.morphisms[out].tgt;
            let cg = restrict(self.sign(self.r_m(m)?), &fc.faces[g].local);
            let vg = self.object(g, &cg, &cg)?;
            add_term(&mut chain, self.arrow(*vs.last().expect("paths are nonempty"), vg, out)?, 1);
            let back = (0..fc.morphisms.len())
                .find(|&k| {
                    let mm = &fc.morphisms[k];
                    mm.tgt == g
                        && !fc.is_identity(k)
                        && fc.faces[mm.src].dim == 0
                        && mm.fm == restrict(&rho, &fc.faces[mm.src].local)
                })
                .ok_or_else(|| Error::Check("no vertex reaches the edge along +ρ".into()))?;
            let next = fc.morphisms[back].src;
            let next_path = self.local_path(m, next)?;
            let v0 = self.object(next, &next_path.vertices[0], &next_path.vertices[0])?;
            add_term(&mut chain, self.arrow(v0, vg, back)?, -1);
            for (w, (a, b)) in winding.iter_mut().zip(fc.morphisms[out].shift.iter().zip(&fc.morphisms[back].shift)) {
                *w += a - b;
            }
            if next == start {
                break;
            }
            p = next;
        }
        Ok(Lambda { layer: m, chamber, chain, winding, vertices })
    }

    /// `Ξ(H;B,P)` for a hypertorus through the vertex `P` of `M` not containing `M`.
    pub fn xi(&self, m: usize, h: usize, chamber: usize, p: usize) -> Result<Chain> {
        let fc = &self.model.faces;
        let local = &fc.faces[p].local;
        let hp = self.model.linear.of_hypertorus[h];
        let pos = local.binary_search(&hp).map_err(|_| Error::Input("hypertorus does not pass through the face".into()))?;
        let path = self.local_path(m, p)?;
        let i = path.wall_at(pos).ok_or_else(|| Error::Input("no wall of the path spans the hyperplane".into()))?;
        let b = restrict(self.sign(chamber), local);
        let w = &path.walls[i];
        let vi = self.object(p, &path.vertices[i], &path.vertices[i])?;
        let vj = self.object(p, &path.vertices[i + 1], &path.vertices[i + 1])?;
        let e = self.object(p, w, &compose(&b, w))?;
        let ebar = self.object(p, w, &compose(&negate(&b), w))?;
        let mut z = Chain::new();
        add_term(&mut z, self.inside(p, vi, e)?, 1);
        add_term(&mut z, self.inside(p, vj, e)?, -1);
        add_term(&mut z, self.inside(p, vj, ebar)?, 1);
        add_term(&mut z, self.inside(p, vi, ebar)?, -1);
        Ok(z)
    }

    /// The hypertorus `H` with `supp(G) = H`, if any.
    pub fn support_hypertorus(&self, g: usize) -> Option<usize> {
        let layer = &self.model.layers.layers[self.model.faces.faces[g].support];
        (layer.rank == 1 && layer.hypertori.len() == 1).then(|| layer.hypertori[0])
    }

    /// `Ω^{(m)}` for a face morphism `m : F → G` with `supp(G)` a hypertorus.
    pub fn omega(&self, fm: usize) -> Result<Chain> {
        let fc = &self.model.faces;
        let mm = &fc.morphisms[fm];
        let h = self.support_hypertorus(mm.tgt).ok_or_else(|| Error::Input("the target face is not supported on a hypertorus".into()))?;
        let f = mm.src;
        let local = &fc.faces[f].local;
        let rh = restrict(self.sign(self.choices.r_hyper[h]), local);
        let c1 = compose(&rh, &mm.fm);
        let c2 = compose(&negate(&rh), &mm.fm);
        let a1 = self.object(f, &c1, &c1)?;
        let a2 = self.object(f, &c2, &c2)?;
        let b1 = self.object(f, &mm.fm, &c1)?;
        let b2 = self.object(f, &mm.fm, &c2)?;
        let mut z = Chain::new();
        add_term(&mut z, self.inside(f, a1, b1)?, 1);
        add_term(&mut z, self.inside(f, a2, b1)?, -1);
        add_term(&mut z, self.inside(f, a2, b2)?, 1);
        add_term(&mut z, self.inside(f, a1, b2)?, -1);
        Ok(z)
    }

    /// Face morphisms `m` usable for `Ω^{(m)}` of the hypertorus `h`.
    pub fn omega_morphisms(&self, h: usize) -> Vec<usize> {
        let fc = &self.model.faces;
        (0..fc.morphisms.len()).filter(|&k| self.support_hypertorus(fc.morphisms[k].tgt) == Some(h)).collect()
    }

    /// `Ω^{(id_G)}` for the first face `G` supported on `h`.
    pub fn omega_hat(&self, h: usize) -> Result<Chain> {
        let fc = &self.model.faces;
        let g = (0..fc.len())
            .find(|&g| self.support_hypertorus(g) == Some(h))
            .ok_or_else(|| Error::Check("no face is supported on the hypertorus".into()))?;
        self.omega(fc.identity[g])
    }

    /// `ε(H,B)`: `+1` iff `X_H` does not separate `R_H` from `B`.
    pub fn epsilon(&self, h: usize, chamber: usize) -> i64 {
        let k = self.model.linear.of_hypertorus[h];
        if self.sign(self.choices.r_hyper[h])[k] == self.sign(chamber)[k] {
            1
        } else {
            -1
        }
    }

    /// `η(M,H)`: `+1` iff `R_M` and `R_H` lie on the same side of `X_H`.
    pub fn eta(&self, m: usize, h: usize) -> Result<i64> {
        let k = self.model.linear.of_hypertorus[h];
        Ok(if self.sign(self.r_m(m)?)[k] == self.sign(self.choices.r_hyper[h])[k] { 1 } else { -1 })
    }

    /// `S_F(B,B')`: hypertori through `F` whose hyperplane separates the chambers.
    pub fn separating(&self, face: usize, b1: usize, b2: usize) -> Vec<usize> {
        let (s1, s2) = (self.sign(b1), self.sign(b2));
        self.model.faces.faces[face]
            .hypertori
            .iter()
            .copied()
            .filter(|&h| {
                let k = self.model.linear.of_hypertorus[h];
                s1[k] != s2[k]
            })
            .collect()
    }

    /// `Σ_{P ⊆ M} Σ_{H ∈ S_P(B,B') \ A_M} Ξ(H;B,P)`.
    pub fn basis_change_rhs(&self, m: usize, b1: usize, b2: usize) -> Result<Chain> {
        let a_m = &self.model.layers.layers[m].hypertori;
        let mut z = Chain::new();
        for p in self.model.faces_in_layer(m) {
            if self.model.faces.faces[p].dim != 0 {
                continue;
            }
            for h in self.separating(p, b1, b2) {
                if a_m.contains(&h) {
                    continue;
                }
                for (&k, &c) in &self.xi(m, h, b1, p)? {
                    add_term(&mut z, k, c);
                }
            }
        }
        Ok(z)
    }

    /// Coefficients `c_H` with `λ̂^M_B − λ̂^M_{B'} = Σ c_H ω̂_H`.
    pub fn basis_change_weights(&self, m: usize, b1: usize, b2: usize) -> Result<BTreeMap<usize, i64>> {
        let a_m = &self.model.layers.layers[m].hypertori;
        let mut out = BTreeMap::new();
        for p in self.model.faces_in_layer(m) {
            if self.model.faces.faces[p].dim != 0 {
                continue;
            }
            for h in self.separating(p, b1, b2) {
                if !a_m.contains(&h) {
                    add_term(&mut out, h, self.epsilon(h, b1) * self.eta(m, h)?);
                }
            }
        }
        Ok(out)
    }
}
