//! Bounded derived category of a representation-finite hereditary algebra.
//!
//! An indecomposable object is `M[i]` for an indecomposable module `M` from the knitted
//! list; it is modelled by its minimal projective resolution placed in degrees
//! `-i-1, -i`. Morphisms are chain maps up to homotopy, so composition is composition
//! of chain maps and no case split between `Hom` and `Ext^1` is needed.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::complex::{compose, hom_k, identity, nakayama_chain, post_maps, HomK, Layout, ModComplex, ProjComplex};
use super::ClusterError;
use crate::exactlin::{Matrix, Scalar};
use crate::homalg::{ext_dim, knit_ar_quiver, minimal_presentation, standard_name, ArQuiver};
use crate::repmod::{find_isomorphism, hom_dim, kernel, Algebra, ModuleMap};

/// Indecomposable object `M[shift]` of the derived category.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ind {
    pub module: usize,
    pub shift: i64,
}

impl Ind {
    pub fn new(module: usize, shift: i64) -> Ind {
        Ind { module, shift }
    }

    pub fn shifted(self, s: i64) -> Ind {
        Ind::new(self.module, self.shift + s)
    }
}

/// Upper bound on the number of indecomposables accepted when knitting.
pub const KNIT_BUDGET: usize = 400;

type Key = (usize, usize, i64);

fn key(x: Ind, y: Ind) -> Key {
    (x.module, y.module, y.shift - x.shift)
}

struct SerreData {
    target: HomK,
    inverse: Matrix,
}

pub struct DerivedModel {
    h: Algebra,
    ar: ArQuiver,
    std: Vec<ProjComplex>,
    hom: Vec<Vec<usize>>,
    ext1: Vec<Vec<usize>>,
    proj_of: Vec<usize>,
    inj_of: Vec<usize>,
    /// Quasi-isomorphism `std(Sigma M) -> nu std(M)` for every module.
    quasi: Vec<Vec<Scalar>>,
    homs: Mutex<HashMap<Key, Arc<HomK>>>,
    serre: Mutex<HashMap<Key, Arc<SerreData>>>,
}

impl std::fmt::Debug for DerivedModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DerivedModel")
            .field("algebra", &self.h.name())
            .field("indecomposables", &self.ar.len())
            .finish()
    }
}

impl DerivedModel {
    pub fn new(h: &Algebra) -> Result<DerivedModel, ClusterError> {
        if !h.is_hereditary_presentation() {
            return Err(ClusterError::NotHereditary);
        }
        let ar = knit_ar_quiver(h, KNIT_BUDGET)?;
        let n = ar.len();
        let mut std = Vec::with_capacity(n);
        let mut aug = Vec::with_capacity(n);
        for m in &ar.modules {
            let p = minimal_presentation(m);
            let c = if p.p1.is_empty() {
                ProjComplex::new(h, 0, vec![p.p0], Vec::new())
            } else {
                ProjComplex::new(h, -1, vec![p.p1, p.p0], vec![p.elems])
            };
            std.push(c);
            aug.push(p.cover);
        }
        let hom = ar.modules.iter().map(|x| ar.modules.iter().map(|y| hom_dim(x, y)).collect()).collect();
        let ext1 = ar.modules.iter().map(|x| ar.modules.iter().map(|y| ext_dim(x, y, 1)).collect()).collect();
        let nv = h.vertex_count();
        let mut proj_of = vec![0; nv];
        let mut inj_of = vec![0; nv];
        for i in 0..n {
            if let Some(v) = ar.projective_at[i] {
                proj_of[v] = i;
            }
            if let Some(v) = ar.injective_at[i] {
                inj_of[v] = i;
            }
        }
        let mut model = DerivedModel {
            h: h.clone(),
            ar,
            std,
            hom,
            ext1,
            proj_of,
            inj_of,
            quasi: Vec::new(),
            homs: Mutex::new(HashMap::new()),
            serre: Mutex::new(HashMap::new()),
        };
        model.quasi = (0..n).map(|m| model.quasi_iso(m, &aug)).collect::<Result<_, _>>()?;
        Ok(model)
    }

    fn quasi_iso(&self, m: usize, aug: &[ModuleMap]) -> Result<Vec<Scalar>, ClusterError> {
        let s = self.serre(Ind::new(m, 0));
        let src = self.complex(s);
        let nu = self.std[m].nakayama();
        let rep = &self.ar.modules[s.module];
        let missing = || ClusterError::Internal(format!("no isomorphism for the Serre image of module {m}"));
        // the generators of Q0 sit in degree -s.shift
        let map = if s.shift == 0 {
            let iso = find_isomorphism(rep, &nu.terms[0]).ok_or_else(missing)?;
            iso.compose(&aug[s.module])
        } else {
            let (k, inc) = kernel(&nu.diffs[0]);
            let iso = find_isomorphism(rep, &k).ok_or_else(missing)?;
            inc.compose(&iso).compose(&aug[s.module])
        };
        let q0 = src.term(-s.shift).expect("resolution has a degree-0 term");
        let images: Vec<Vec<Scalar>> = (0..q0.len())
            .map(|i| map.comp(q0.vertices[i]).mul_vec(&q0.generator(i)))
            .collect();
        let lay = Layout::new(&src, &nu);
        let mut coords = vec![self.h.field().zero(); lay.total()];
        lay.set_images(&mut coords, -s.shift, &images);
        Ok(coords)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.h
    }

    pub fn ar_quiver(&self) -> &ArQuiver {
        &self.ar
    }

    pub fn module_count(&self) -> usize {
        self.ar.len()
    }

    pub fn is_projective(&self, m: usize) -> bool {
        self.ar.projective_at[m].is_some()
    }

    pub fn projective(&self, v: usize) -> usize {
        self.proj_of[v]
    }

    pub fn injective(&self, v: usize) -> usize {
        self.inj_of[v]
    }

    /// Minimal projective resolution of the module, placed for `x`.
    pub fn complex(&self, x: Ind) -> ProjComplex {
        self.std[x.module].shifted(x.shift)
    }

    pub fn name(&self, x: Ind) -> String {
        let m = &self.ar.modules[x.module];
        let base = standard_name(m).unwrap_or_else(|| {
            let dims: Vec<String> = m.dims().iter().map(usize::to_string).collect();
            format!("M({})", dims.join(","))
        });
        if x.shift == 0 {
            base
        } else {
            format!("{base}[{}]", x.shift)
        }
    }

    /// Serre functor on objects: `P_v[i] -> I_v[i]`, otherwise `M[i] -> (tau M)[i+1]`.
    pub fn serre(&self, x: Ind) -> Ind {
        match self.ar.projective_at[x.module] {
            Some(v) => Ind::new(self.inj_of[v], x.shift),
            None => Ind::new(self.ar.tau[x.module].expect("non-projective has a translate"), x.shift + 1),
        }
    }

    pub fn serre_inv(&self, x: Ind) -> Ind {
        match self.ar.injective_at[x.module] {
            Some(v) => Ind::new(self.proj_of[v], x.shift),
            None => Ind::new(self.ar.tau_inv[x.module].expect("non-injective has an inverse translate"), x.shift - 1),
        }
    }

    /// `dim Hom_D(x, y)` from the module tables.
    pub fn hom_dim(&self, x: Ind, y: Ind) -> usize {
        match y.shift - x.shift {
            0 => self.hom[x.module][y.module],
            1 => self.ext1[x.module][y.module],
            _ => 0,
        }
    }

    /// Chain-level `Hom_D(x, y)`; coordinates only depend on the shift difference.
    pub fn hom_space(&self, x: Ind, y: Ind) -> Arc<HomK> {
        let k = key(x, y);
        if let Some(h) = self.homs.lock().unwrap().get(&k) {
            return h.clone();
        }
        let h = Arc::new(hom_k(&self.std[x.module], &self.std[y.module].shifted(k.2).modules()));
        self.homs.lock().unwrap().insert(k, h.clone());
        h
    }

    pub fn identity(&self, x: Ind) -> Vec<Scalar> {
        identity(&self.std[x.module])
    }

    /// `g o f` for `f: x -> y`, `g: y -> z`.
    pub fn compose(&self, x: Ind, y: Ind, z: Ind, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
        compose(&self.complex(x), &self.complex(y), &self.complex(z).modules(), f, g)
    }

    fn serre_data(&self, x: Ind, y: Ind) -> Result<Arc<SerreData>, ClusterError> {
        let k = key(x, y);
        if let Some(d) = self.serre.lock().unwrap().get(&k) {
            return Ok(d.clone());
        }
        let (x, y) = (Ind::new(x.module, 0), Ind::new(y.module, k.2));
        let (sx, sy) = (self.serre(x), self.serre(y));
        let src = self.complex(sx);
        let mid = self.complex(sy);
        let nuy: ModComplex = self.complex(y).nakayama();
        let target = hom_k(&src, &nuy);
        let w = self.hom_space(sx, sy);
        let f = self.h.field();
        let mut cols = Vec::with_capacity(w.dim());
        for c in &w.basis {
            let img = compose(&src, &mid, &nuy, c, &self.quasi[y.module]);
            cols.push(target.coords(&img).ok_or_else(|| ClusterError::Internal("quasi-isomorphism is not a chain map".into()))?);
        }
        let phi = Matrix::from_columns(f, target.dim(), &cols);
        let inverse = if w.dim() == 0 && target.dim() == 0 {
            phi.clone()
        } else {
            phi.inverse()
                .ok_or_else(|| ClusterError::Internal("quasi-isomorphism does not induce a bijection on Hom".into()))?
        };
        let d = Arc::new(SerreData { target, inverse });
        self.serre.lock().unwrap().insert(k, d.clone());
        Ok(d)
    }

    /// Serre functor on a morphism `f: x -> y`, giving `Sigma f: Sigma x -> Sigma y`.
    ///
    /// `Sigma f` is the unique class with `q_y o Sigma f = nu(f) o q_x` up to homotopy.
    pub fn serre_map(&self, x: Ind, y: Ind, f: &[Scalar]) -> Result<Vec<Scalar>, ClusterError> {
        let data = self.serre_data(x, y)?;
        let (sx, sy) = (self.serre(x), self.serre(y));
        let src = self.complex(sx);
        let (cx, cy) = (self.complex(x), self.complex(y));
        let nu_f = nakayama_chain(&cx, &cy, f);
        let img = post_maps(&src, &cx.nakayama(), &cy.nakayama(), &self.quasi[x.module], &nu_f);
        let t = data
            .target
            .coords(&img)
            .ok_or_else(|| ClusterError::Internal("nu(f) o q is not a chain map".into()))?;
        let a = data.inverse.mul_vec(&t);
        Ok(self.hom_space(sx, sy).combination(&a))
    }
}
