//! Functors between Grothendieck constructions and the subcategories on which
//! local classes are detected.
//!
//! Every functor here is induced by an affine map of tori that sends open
//! cells into open cells. The face part is read off from where a cell's
//! barycenter lands; the local part is a signed matching of hyperplanes.

use num_bigint::BigInt;

use super::{ToricArrangement, ToricModel};
use crate::category::{AcyclicCategory, Nerve, Simplex};
use crate::cohomology::Space;
use crate::error::{Error, Result};
use crate::hyperplane::{restrict, zero_set};
use crate::lattice::{dot_q, quotient_group, rank_q, solve_q, to_q, FiniteAbelianGroup, IntMatrix, Q};

/// A functor of acyclic categories. A morphism sent to an identity maps to `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryMap {
    pub objects: Vec<usize>,
    pub morphisms: Vec<Option<usize>>,
}

impl CategoryMap {
    /// The inclusion of a full subcategory.
    pub fn inclusion(objects: &[usize], morphisms: &[usize]) -> CategoryMap {
        CategoryMap { objects: objects.to_vec(), morphisms: morphisms.iter().map(|&m| Some(m)).collect() }
    }

    /// Endpoints and composites are respected.
    pub fn check(&self, src: &AcyclicCategory, tgt: &AcyclicCategory) -> Result<()> {
        if self.objects.len() != src.n_objects || self.morphisms.len() != src.morphisms.len() {
            return Err(Error::Dimension("functor tables do not match the source category".into()));
        }
        for (m, &(s, t)) in src.morphisms.iter().enumerate() {
            let (fs, ft) = (self.objects[s], self.objects[t]);
            match self.morphisms[m] {
                Some(i) if tgt.morphisms[i] != (fs, ft) => {
                    return Err(Error::Check(format!("morphism {m} lands on a morphism with the wrong endpoints")));
                }
                None if fs != ft => {
                    return Err(Error::Check(format!("morphism {m} is collapsed between distinct objects")));
                }
                _ => {}
            }
        }
        for (&(f, g), &h) in &src.compose {
            let image = match (self.morphisms[f], self.morphisms[g]) {
                (Some(a), Some(b)) => Some(tgt.comp(a, b)),
                (a, None) => a,
                (None, b) => b,
            };
            if image != self.morphisms[h] {
                return Err(Error::Check(format!("composite of {f} and {g} is not preserved")));
            }
        }
        Ok(())
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CategoryMap) -> CategoryMap {
        CategoryMap {
            objects: self.objects.iter().map(|&o| next.objects[o]).collect(),
            morphisms: self.morphisms.iter().map(|m| m.and_then(|m| next.morphisms[m])).collect(),
        }
    }

    /// Images of the `k`-simplices; degenerate images are `None`.
    pub fn simplex_map(&self, src: &Nerve, tgt: &Nerve, k: usize) -> Vec<Option<usize>> {
        if k > src.top() {
            return Vec::new();
        }
        src.simplices[k]
            .iter()
            .map(|s| {
                let image = match s {
                    Simplex::Vertex(o) => Simplex::Vertex(self.objects[*o]),
                    Simplex::Chain(ms) => {
                        Simplex::Chain(ms.iter().map(|&m| self.morphisms[m]).collect::<Option<Vec<usize>>>()?)
                    }
                };
                tgt.index_of(k, &image)
            })
            .collect()
    }
}

/// A functor `Sal(src) → Sal(tgt)` together with its face-level data.
#[derive(Clone, Debug)]
pub struct InducedMap {
    /// Image face and the translation of its representative, per source face.
    pub faces: Vec<(usize, Vec<BigInt>)>,
    /// Image of each face morphism, identities included.
    pub face_morphisms: Vec<usize>,
    pub functor: CategoryMap,
}

/// Build the functor induced by `point`, an affine map sending open cells of
/// `src` into open cells of `tgt`.
///
/// `matching[h']` is the hyperplane of `src`'s `A_0` pulled back from the
/// hyperplane `h'` of `tgt`'s `A_0`, and the sign relating their normals.
pub fn induced_map(
    src: &ToricModel,
    tgt: &ToricModel,
    point: &dyn Fn(&[Q]) -> Vec<Q>,
    matching: &[(usize, i8)],
) -> Result<InducedMap> {
    let sfc = &src.faces;
    let tfc = &tgt.faces;
    let locate = |p: &[Q]| {
        tfc.locate(&tgt.arrangement, &point(p)).ok_or_else(|| Error::Check("image point lies in no face".into()))
    };
    let faces: Vec<(usize, Vec<BigInt>)> = sfc.faces.iter().map(|f| locate(&f.barycenter)).collect::<Result<_>>()?;
    let mut face_morphisms = Vec::with_capacity(sfc.morphisms.len());
    for m in &sfc.morphisms {
        let p: Vec<Q> = sfc.faces[m.tgt].barycenter.iter().zip(&m.shift).map(|(b, s)| b + Q::from_integer(s.clone())).collect();
        let (g, tg) = locate(&p)?;
        let (f, tf) = &faces[m.src];
        if g != faces[m.tgt].0 {
            return Err(Error::Check("face map does not commute with translations".into()));
        }
        let shift: Vec<BigInt> = tg.iter().zip(tf).map(|(a, b)| a - b).collect();
        face_morphisms.push(tfc.find(*f, g, &shift).ok_or_else(|| Error::Check("closure relation is not preserved".into()))?);
    }
    // Local sign maps: position in A[F] and sign, per hyperplane of A[F'].
    let mut local_maps: Vec<Vec<(usize, i8)>> = Vec::with_capacity(sfc.len());
    for (f, (fi, _)) in faces.iter().enumerate() {
        let hs = &sfc.faces[f].local;
        let map = tfc.faces[*fi]
            .local
            .iter()
            .map(|&h2| {
                let (h, s) = matching[h2];
                hs.binary_search(&h).map(|pos| (pos, s)).map_err(|_| {
                    Error::Check(format!("hyperplane {h2} of the image is not pulled back into the local arrangement"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        local_maps.push(map);
    }
    let mut objects = Vec::with_capacity(src.salvetti.len());
    for &(f, x) in &src.salvetti.objects {
        let (sl, tl) = (src.local(f), tgt.local(faces[f].0));
        let (g, c) = sl.sal.cells[x];
        let pull = |k: usize| -> Vec<i8> { local_maps[f].iter().map(|&(p, s)| s * sl.faces.sign(k)[p]).collect() };
        let g2 = tl.faces.index_of(&pull(g)).ok_or_else(|| Error::Check("sign vector is not a face".into()))?;
        let c2 = tl.faces.index_of(&pull(c)).ok_or_else(|| Error::Check("sign vector is not a face".into()))?;
        let cell = tl.sal.index_of(g2, c2).ok_or_else(|| Error::Check("image is not a cell".into()))?;
        objects.push(tgt.salvetti.object(faces[f].0, cell).expect("every cell is an object"));
    }
    let mut morphisms = Vec::with_capacity(src.salvetti.morphisms.len());
    for &(a, b, fm) in &src.salvetti.morphisms {
        let (oa, ob, fm2) = (objects[a], objects[b], face_morphisms[fm]);
        if oa == ob && tfc.is_identity(fm2) {
            morphisms.push(None);
            continue;
        }
        let m = tgt.salvetti.morphism(oa, ob, fm2).ok_or_else(|| Error::Check("image of a morphism is not a morphism".into()))?;
        morphisms.push(Some(m));
    }
    Ok(InducedMap { faces, face_morphisms, functor: CategoryMap { objects, morphisms } })
}

/// Pull back each hyperplane of `tgt` along the linear part `normal ↦ normal · lin`.
fn matching_by_normals(src: &ToricModel, tgt: &ToricModel, lin: &dyn Fn(&[BigInt]) -> Vec<BigInt>) -> Result<Vec<(usize, i8)>> {
    tgt.linear
        .normals
        .iter()
        .map(|n| {
            let pulled = lin(n);
            let neg: Vec<BigInt> = pulled.iter().map(|x| -x).collect();
            src.linear
                .normals
                .iter()
                .enumerate()
                .find_map(|(h, m)| {
                    if m == &pulled {
                        Some((h, 1))
                    } else if m == &neg {
                        Some((h, -1))
                    } else {
                        None
                    }
                })
                .ok_or_else(|| Error::Check("a hyperplane has no preimage".into()))
        })
        .collect()
}

/// The quotient `T → T / T_L` by the subtorus parallel to a layer, on `A_L`.
#[derive(Debug)]
pub struct Quotient {
    pub layer: usize,
    /// Rows `β_j`: the quotient map is `t ↦ (⟨β_j, t⟩)_j`.
    pub basis: Vec<Vec<BigInt>>,
    pub model: ToricModel,
    /// Hypertorus of `self.model` for each hypertorus of `A_L`, aligned with the layer's list.
    pub image: Vec<usize>,
    /// `matching[h']`: hyperplane of `A_0` and sign pulled back from hyperplane `h'` of the quotient's `A_0`.
    pub matching: Vec<(usize, i8)>,
    pub map: InducedMap,
}

impl ToricModel {
    pub fn quotient(&self, l: usize) -> Result<Quotient> {
        let layer = &self.layers.layers[l];
        let basis = layer.characters.clone();
        let r = basis.len();
        if r == 0 {
            return Err(Error::Input("the quotient by the whole torus is a point".into()));
        }
        let d = self.arrangement.dim;
        // Column j of `cols` is β_j, so that `cols · c = χ` solves for the quotient character.
        let cols: Vec<Vec<Q>> = (0..d).map(|i| (0..r).map(|j| Q::from_integer(basis[j][i].clone())).collect()).collect();
        let mut hypertori = Vec::with_capacity(layer.hypertori.len());
        for &h in &layer.hypertori {
            let ht = &self.arrangement.hypertori[h];
            let c = solve_q(&cols, &to_q(&ht.chi), r)
                .filter(|c| c.iter().all(|x| x.is_integer()))
                .ok_or_else(|| Error::Check(format!("character of {} is not in the saturated lattice", ht.name)))?;
            hypertori.push(super::Hypertorus {
                name: ht.name.clone(),
                chi: c.iter().map(|x| x.to_integer()).collect(),
                offset: ht.offset.clone(),
            });
        }
        let rank = self.arrangement.rank_in_order();
        let mut ordering: Vec<usize> = (0..hypertori.len()).collect();
        ordering.sort_by_key(|&k| rank[layer.hypertori[k]]);
        let arr = ToricArrangement::new(r, hypertori, Some(ordering))?;
        let model = ToricModel::new(arr)?;
        let bq: Vec<Vec<Q>> = basis.iter().map(|b| to_q(b)).collect();
        let point = |p: &[Q]| -> Vec<Q> { bq.iter().map(|b| dot_q(b, p)).collect() };
        let lin = |n: &[BigInt]| -> Vec<BigInt> {
            (0..d).map(|i| n.iter().zip(&basis).fold(BigInt::from(0), |acc, (nj, bj)| acc + nj * &bj[i])).collect()
        };
        let matching = matching_by_normals(self, &model, &lin)?;
        let map = induced_map(self, &model, &point, &matching)?;
        let image = (0..layer.hypertori.len()).collect();
        Ok(Quotient { layer: l, basis, model, image, matching, map })
    }

    /// The inclusion of complements `M(A) → M(A')` for the subarrangement on `keep`,
    /// with the hyperplane matching of the two linear models.
    pub fn deletion(&self, keep: &[usize]) -> Result<(ToricModel, InducedMap, Vec<(usize, i8)>)> {
        let model = ToricModel::new(self.arrangement.sub(keep)?)?;
        let matching = matching_by_normals(self, &model, &|n: &[BigInt]| n.to_vec())?;
        let map = induced_map(self, &model, &|p: &[Q]| p.to_vec(), &matching)?;
        Ok((model, map, matching))
    }

    /// Translation by a point `g` fixing every hypertorus.
    pub fn translation(&self, g: &[Q]) -> Result<InducedMap> {
        let chi: Vec<Vec<Q>> = self.arrangement.hypertori.iter().map(|h| to_q(&h.chi)).collect();
        if chi.iter().any(|c| !dot_q(c, g).is_integer()) {
            return Err(Error::Input("translation does not preserve the arrangement".into()));
        }
        let matching: Vec<(usize, i8)> = (0..self.linear.normals.len()).map(|h| (h, 1)).collect();
        let point = |p: &[Q]| -> Vec<Q> { p.iter().zip(g).map(|(a, b)| a + b).collect() };
        induced_map(self, self, &point, &matching)
    }

    /// The projection `(F, x) ↦ F` onto the face category returned by [`super::FaceCategory::category`].
    pub fn projection(&self) -> CategoryMap {
        let (_, keep) = self.faces.category();
        let mut new = vec![None; self.faces.morphisms.len()];
        for (i, &m) in keep.iter().enumerate() {
            new[m] = Some(i);
        }
        CategoryMap {
            objects: self.salvetti.objects.iter().map(|&(f, _)| f).collect(),
            morphisms: self.salvetti.morphisms.iter().map(|&(_, _, fm)| new[fm]).collect(),
        }
    }

    /// The full subcategory on `(F, x)` with `F ⊆ Y` and `x` in the upper
    /// set of the restriction of `F0`, a face of `A_0` spanning `X_Y`.
    pub fn subcategory(&self, y: usize, f0: usize) -> Result<Subcategory> {
        let sign = self.linear.faces.sign(f0);
        if zero_set(sign) != self.x_layer(y) {
            return Err(Error::Input("the face does not span the layer's flat".into()));
        }
        let mut keep = vec![false; self.salvetti.len()];
        for f in self.faces_in_layer(y) {
            let local = self.local(f);
            let g = local.faces.index_of(&restrict(sign, &local.hyperplanes)).expect("restrictions of faces are faces");
            for x in local.sal.s_upper(&local.faces, g) {
                keep[self.salvetti.object(f, x).expect("every cell is an object")] = true;
            }
        }
        let (cat, objects, morphisms) = self.salvetti.category.full_subcategory(&keep);
        Ok(Subcategory { layer: y, face: f0, cat, inclusion: CategoryMap::inclusion(&objects, &morphisms) })
    }

    /// `G_S`: components of the subgroup fixing every hypertorus of `s`.
    pub fn stabilizer(&self, s: &[usize]) -> FiniteAbelianGroup {
        let d = self.arrangement.dim;
        let rows: Vec<Vec<BigInt>> = s.iter().map(|&h| self.arrangement.hypertori[h].chi.clone()).collect();
        quotient_group(&IntMatrix::from_rows_with_cols(&rows, d), d)
    }

    /// Elements of `G_S` mapping the layer to itself.
    pub fn layer_stabilizer(&self, s: &[usize], l: usize) -> Vec<Vec<Q>> {
        let layer = &self.layers.layers[l];
        self.stabilizer(s)
            .elements
            .into_iter()
            .filter(|g| layer.contains_point(&layer.base.iter().zip(g).map(|(a, b)| a + b).collect::<Vec<_>>()))
            .collect()
    }

    /// The component through `Y` of the intersection of the hypertori of `s` containing `Y`.
    pub fn closure_in(&self, s: &[usize], y: usize) -> usize {
        let sy: Vec<usize> = s.iter().copied().filter(|h| self.layers.layers[y].hypertori.contains(h)).collect();
        let d = self.arrangement.dim;
        let r = rank_q(&sy.iter().map(|&h| to_q(&self.arrangement.hypertori[h].chi)).collect::<Vec<_>>(), d);
        (0..self.layers.len())
            .find(|&z| {
                let lz = &self.layers.layers[z];
                lz.rank == r && sy.iter().all(|h| lz.hypertori.contains(h)) && self.layers.leq(z, y)
            })
            .expect("intersections of hypertori through a layer contain it")
    }
}

/// A full subcategory of `∫D` with its inclusion.
#[derive(Clone, Debug)]
pub struct Subcategory {
    pub layer: usize,
    /// Face of `A_0` spanning `X_Y`.
    pub face: usize,
    pub cat: AcyclicCategory,
    pub inclusion: CategoryMap,
}

impl Subcategory {
    /// Cohomology through degree `top` and the simplex maps into `ambient` in each degree.
    pub fn space(&self, ambient: &Space, top: usize) -> Result<(Space, Vec<Vec<Option<usize>>>)> {
        let space = Space::new(self.cat.clone(), top)?;
        let maps = (0..=top).map(|k| self.inclusion.simplex_map(&space.nerve, &ambient.nerve, k)).collect();
        Ok((space, maps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{q, qi};
    use crate::toric::tests::example;

    fn model() -> ToricModel {
        ToricModel::new(example()).unwrap()
    }

    #[test]
    fn projection_is_a_functor() {
        let m = model();
        let (fc, _) = m.faces.category();
        m.projection().check(&m.salvetti.category, &fc).unwrap();
    }

    #[test]
    fn quotients_are_functors() {
        let m = model();
        for l in 1..m.layers.len() {
            let qt = m.quotient(l).unwrap();
            assert_eq!(qt.model.arrangement.dim, m.layers.layers[l].rank);
            qt.map.functor.check(&m.salvetti.category, &qt.model.salvetti.category).unwrap();
        }
        assert!(m.quotient(0).is_err());
    }

    #[test]
    fn quotient_at_a_point_is_the_identity_up_to_basis() {
        let m = model();
        let p = m.layers.by_name("P").unwrap();
        let qt = m.quotient(p).unwrap();
        assert_eq!(qt.model.salvetti.len(), m.salvetti.len());
        let mut objs = qt.map.functor.objects.clone();
        objs.sort_unstable();
        objs.dedup();
        assert_eq!(objs.len(), m.salvetti.len());
    }

    #[test]
    fn deletion_and_translation_are_functors() {
        let m = model();
        let (sub, map, _) = m.deletion(&[0, 1]).unwrap();
        map.functor.check(&m.salvetti.category, &sub.salvetti.category).unwrap();
        let g = vec![qi(0), q(1, 2)];
        let t = sub.translation(&g).unwrap();
        t.functor.check(&sub.salvetti.category, &sub.salvetti.category).unwrap();
        // Translating twice by a point of order two is the identity.
        let twice = t.functor.then(&t.functor);
        assert_eq!(twice.objects, (0..sub.salvetti.len()).collect::<Vec<_>>());
        assert!(m.translation(&g).is_err());
    }

    #[test]
    fn subcategories_at_a_point_are_salvetti_complexes() {
        let m = model();
        let p = m.layers.by_name("P").unwrap();
        let zero = m.x_layer(p);
        for f0 in m.linear.faces.faces_spanning(&zero) {
            let s = m.subcategory(p, f0).unwrap();
            // One vertex: the cells of the local Salvetti complex above the origin.
            assert_eq!(s.cat.n_objects, m.local(m.faces_in_layer(p)[0]).sal.len());
            s.inclusion.check(&s.cat, &m.salvetti.category).unwrap();
        }
    }

    #[test]
    fn stabilizers() {
        let m = model();
        assert_eq!(m.stabilizer(&[0, 1]).elements.len(), 2);
        assert_eq!(m.stabilizer(&[0, 2]).elements.len(), 1);
        let qq = m.layers.by_name("Q").unwrap();
        let p = m.layers.by_name("P").unwrap();
        assert_eq!(m.layer_stabilizer(&[0, 1], qq).len(), 1);
        assert_eq!(m.closure_in(&[0, 1], p), p);
        assert_eq!(m.closure_in(&[0], p), m.layers.by_name("H0").unwrap());
        assert_eq!(m.closure_in(&[], qq), 0);
    }
}
