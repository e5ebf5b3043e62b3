use std::collections::HashMap;
use std::sync::Arc;

use super::{FaceCategory, LinearModel};
use crate::category::AcyclicCategory;
use crate::error::Result;
use crate::hyperplane::{i_m, restrict, FacePoset, SalvettiPoset};

/// A local arrangement `A[F] ⊆ A_0` with its face and Salvetti posets.
#[derive(Clone, Debug)]
pub struct Local {
    /// Hyperplanes as sorted indices into `A_0`.
    pub hyperplanes: Vec<usize>,
    pub faces: FacePoset,
    pub sal: SalvettiPoset,
    /// `below[z]`: cells `x ≤ z` in the cell order.
    pub below: Vec<Vec<usize>>,
}

impl Local {
    pub fn new(linear: &LinearModel, hyperplanes: &[usize]) -> Local {
        let faces = FacePoset::new(&linear.arrangement.sub(hyperplanes));
        let sal = SalvettiPoset::new(&faces);
        let below = (0..sal.len()).map(|z| (0..sal.len()).filter(|&x| sal.leq(&faces, x, z)).collect()).collect();
        Local { hyperplanes: hyperplanes.to_vec(), faces, sal, below }
    }

    /// The face of `A[F]` obtained by restricting a face of `A_0`.
    pub fn restrict_global(&self, sign: &[i8]) -> usize {
        self.faces.index_of(&restrict(sign, &self.hyperplanes)).expect("restrictions of faces are faces")
    }
}

/// The Grothendieck construction `∫D` of the diagram `F ↦ S(A[F])`.
///
/// A morphism `(F,x) → (G,y)` is an attachment `m : F → G` together with
/// `x ≤ D(m)(y)` in the cell order of `S(A[F])`.
#[derive(Clone, Debug)]
pub struct SalvettiCategory {
    /// `(torus face, cell of S(A[face]))`.
    pub objects: Vec<(usize, usize)>,
    /// `(source object, target object, face morphism)` for non-identity morphisms.
    pub morphisms: Vec<(usize, usize, usize)>,
    pub category: AcyclicCategory,
    /// `dmap[m][y] = D(m)(y)` for every face morphism `m`.
    pub dmap: Vec<Vec<usize>>,
    object_index: HashMap<(usize, usize), usize>,
    morphism_index: HashMap<(usize, usize, usize), usize>,
}

impl SalvettiCategory {
    pub fn new(fc: &FaceCategory, locals: &HashMap<Vec<usize>, Arc<Local>>) -> Result<Self> {
        let local = |f: usize| &locals[&fc.faces[f].local];
        let mut objects = Vec::new();
        for f in 0..fc.len() {
            for x in 0..local(f).sal.len() {
                objects.push((f, x));
            }
        }
        let object_index: HashMap<(usize, usize), usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let mut dmap: Vec<Vec<usize>> = Vec::with_capacity(fc.morphisms.len());
        for m in &fc.morphisms {
            let (src, tgt) = (local(m.src), local(m.tgt));
            let face_map: Vec<usize> = (0..tgt.faces.len())
                .map(|k| {
                    let s = i_m(&src.hyperplanes, &tgt.hyperplanes, &m.fm, tgt.faces.sign(k))
                        .expect("F_m vanishes exactly on the target arrangement");
                    src.faces.index_of(&s).expect("i_m sends faces to faces")
                })
                .collect();
            dmap.push(
                tgt.sal
                    .cells
                    .iter()
                    .map(|&(g, k)| src.sal.index_of(face_map[g], face_map[k]).expect("D(m) sends cells to cells"))
                    .collect(),
            );
        }
        let mut morphisms = Vec::new();
        for (mi, m) in fc.morphisms.iter().enumerate() {
            let id = fc.is_identity(mi);
            let src = local(m.src);
            for y in 0..local(m.tgt).sal.len() {
                let z = dmap[mi][y];
                for &x in &src.below[z] {
                    if id && x == y {
                        continue;
                    }
                    morphisms.push((object_index[&(m.src, x)], object_index[&(m.tgt, y)], mi));
                }
            }
        }
        morphisms.sort_unstable();
        let morphism_index: HashMap<(usize, usize, usize), usize> =
            morphisms.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        for (i, &(s, _, _)) in morphisms.iter().enumerate() {
            by_src[s].push(i);
        }
        let mut compose = HashMap::new();
        for (i, &(a, b, m1)) in morphisms.iter().enumerate() {
            for &j in &by_src[b] {
                let (_, c, m2) = morphisms[j];
                let m = fc.compose(m1, m2);
                compose.insert((i, j), morphism_index[&(a, c, m)]);
            }
        }
        let category = AcyclicCategory::new(objects.len(), morphisms.iter().map(|&(s, t, _)| (s, t)).collect(), compose)?;
        Ok(SalvettiCategory { objects, morphisms, category, dmap, object_index, morphism_index })
    }

    pub fn object(&self, face: usize, cell: usize) -> Option<usize> {
        self.object_index.get(&(face, cell)).copied()
    }

    /// The non-identity morphism `src → tgt` lying over the face morphism `fm`.
    pub fn morphism(&self, src: usize, tgt: usize, fm: usize) -> Option<usize> {
        self.morphism_index.get(&(src, tgt, fm)).copied()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
}
