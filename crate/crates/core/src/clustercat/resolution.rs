//! Resolutions by a cluster-tilting subcategory, and cluster-tilting sets obtained by
//! projecting tilting complexes.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::complex::{cocone, compose, hom_k, sum_map, ProjComplex};
use super::{ClusterCategory, ClusterError, Ind, TiltingCertificate};
use crate::exactlin::{Matrix, Scalar};
use crate::homalg::ext_dim;
use crate::quiveralg::{present_algebra, StructureConstants};
use crate::repmod::{decompose, injective, projective, Algebra};

/// Complex `T_{d-1} -> ... -> T_0 -> Y` built from iterated right approximations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangularResolution {
    pub target: usize,
    /// Summands of `T_i` as domain objects, with repetition.
    pub terms: Vec<Vec<usize>>,
    /// `T_{d-1} = Z_{d-2}` lies in the subcategory.
    pub last_in_set: bool,
    /// For each `T` in the set: degree-0 homology of `Hom_C(T, T_*)` and `dim Hom_C(T, Y)`.
    pub covariant_degree0: Vec<(usize, usize)>,
    /// For each `T` in the set: top homology of `Hom_C(T_*, T)` and `dim Hom_C(Y[1-d], T)`.
    pub contravariant_top: Vec<(usize, usize)>,
    /// Homology of `Hom_C(T_*, T)` one degree below the top.
    pub contravariant_below_top: Vec<usize>,
    pub holds: bool,
}

/// A tilting complex, its image in the cluster category and the Hom formula entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TiltingReport {
    pub summands: Vec<Ind>,
    pub projected: Vec<usize>,
    pub certificate: TiltingCertificate,
    pub endo_dimension: usize,
    /// `(x, y, dim Hom_C, dim Hom_D, dim Ext^d_E(nu P_x, P_y))` with `E = End_D(T)`.
    pub entries: Vec<(usize, usize, usize, usize, usize)>,
    pub holds: bool,
}

fn cohomology_range(c: &ProjComplex) -> Option<(i64, i64)> {
    let h = c.cohomology();
    Some((h.first()?.0, h.last()?.0))
}

fn rank_of(cols: Vec<Vec<Scalar>>, rows: usize, c: &ClusterCategory) -> usize {
    if cols.is_empty() || rows == 0 {
        return 0;
    }
    Matrix::from_columns(c.model().algebra().field(), rows, &cols).rank()
}

impl ClusterCategory {
    /// Objects `F^m t` that can map nontrivially to a complex with cohomology in `[lo, hi]`.
    fn sources_into(&self, t: Ind, range: (i64, i64)) -> Vec<Ind> {
        self.orbit_window(t, -range.1 - 1, -range.0).into_iter().map(|p| p.1).collect()
    }

    /// Objects `F^m t` that can receive nontrivial maps from a complex with cohomology in `[lo, hi]`.
    fn targets_from(&self, t: Ind, range: (i64, i64)) -> Vec<Ind> {
        self.orbit_window(t, -range.1, -range.0 + 1).into_iter().map(|p| p.1).collect()
    }

    /// A right approximation of `z` by the set: one summand per basis morphism.
    fn approximation(&self, set: &[usize], z: &ProjComplex) -> (ProjComplex, Vec<Scalar>, Vec<usize>) {
        let a = self.model().algebra().clone();
        let Some(range) = cohomology_range(z) else {
            return (ProjComplex::zero(&a), Vec::new(), Vec::new());
        };
        let zm = z.modules();
        let mut parts = Vec::new();
        let mut maps = Vec::new();
        let mut summands = Vec::new();
        for &j in set {
            for o in self.sources_into(self.object(j), range) {
                let src = self.model().complex(o);
                for c in hom_k(&src, &zm).basis {
                    parts.push(src.clone());
                    maps.push(c);
                    summands.push(j);
                }
            }
        }
        let refs: Vec<&ProjComplex> = parts.iter().collect();
        let (b, phi) = sum_map(&a, &refs, &zm, &maps);
        (b, phi, summands)
    }

    /// Indecomposable summands of a complex, reduced into the domain.
    fn summands_of(&self, c: &ProjComplex) -> Result<Vec<usize>, ClusterError> {
        let mut out = Vec::new();
        for (k, h) in c.cohomology() {
            for s in decompose(&h)?.summands {
                let m = self
                    .model()
                    .ar_quiver()
                    .find(&s.module)
                    .ok_or_else(|| ClusterError::Internal("cohomology summand missing from the knitted list".into()))?;
                out.push(self.reduce(Ind::new(m, -k))?.0);
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Rank of `Hom_C(t, x1) -> Hom_C(t, x0)` given by postcomposition with `delta`.
    fn covariant_rank(&self, t: Ind, x1: &ProjComplex, x0: &ProjComplex, delta: &[Scalar]) -> usize {
        let (Some(r1), Some(r0)) = (cohomology_range(x1), cohomology_range(x0)) else {
            return 0;
        };
        let range = (r1.0.min(r0.0), r1.1.max(r0.1));
        let x0m = x0.modules();
        let mut total = 0;
        for o in self.sources_into(t, range) {
            let src = self.model().complex(o);
            let h1 = hom_k(&src, &x1.modules());
            let h0 = hom_k(&src, &x0m);
            let cols: Vec<Vec<Scalar>> = h1
                .basis
                .iter()
                .map(|b| h0.coords(&compose(&src, x1, &x0m, b, delta)).expect("composite of chain maps"))
                .collect();
            total += rank_of(cols, h0.dim(), self);
        }
        total
    }

    fn covariant_dim(&self, t: Ind, x: &ProjComplex) -> usize {
        let Some(range) = cohomology_range(x) else { return 0 };
        let xm = x.modules();
        self.sources_into(t, range)
            .into_iter()
            .map(|o| hom_k(&self.model().complex(o), &xm).dim())
            .sum()
    }

    fn contravariant_dim(&self, x: &ProjComplex, t: Ind) -> usize {
        let Some(range) = cohomology_range(x) else { return 0 };
        self.targets_from(t, range)
            .into_iter()
            .map(|o| hom_k(x, &self.model().complex(o).modules()).dim())
            .sum()
    }

    /// Rank of `Hom_C(x0, t) -> Hom_C(x1, t)` given by precomposition with `delta`.
    fn contravariant_rank(&self, x1: &ProjComplex, x0: &ProjComplex, delta: &[Scalar], t: Ind) -> usize {
        let (Some(r1), Some(r0)) = (cohomology_range(x1), cohomology_range(x0)) else {
            return 0;
        };
        let range = (r1.0.min(r0.0), r1.1.max(r0.1));
        let mut total = 0;
        for o in self.targets_from(t, range) {
            let om = self.model().complex(o).modules();
            let h0 = hom_k(x0, &om);
            let h1 = hom_k(x1, &om);
            let cols: Vec<Vec<Scalar>> = h0
                .basis
                .iter()
                .map(|g| h1.coords(&compose(x1, x0, &om, delta, g)).expect("composite of chain maps"))
                .collect();
            total += rank_of(cols, h1.dim(), self);
        }
        total
    }

    /// Resolve the domain object `y` by the cluster-tilting set `set`.
    pub fn triangular_resolution(&self, set: &[usize], y: usize) -> Result<TriangularResolution, ClusterError> {
        if !self.is_cluster_tilting(set)?.holds {
            return Err(ClusterError::NotClusterTilting);
        }
        if y >= self.domain().len() {
            return Err(ClusterError::InvalidInput(format!("object {y} is outside the domain")));
        }
        if set.contains(&y) {
            return Ok(TriangularResolution {
                target: y,
                terms: vec![vec![y]],
                last_in_set: true,
                covariant_degree0: Vec::new(),
                contravariant_top: Vec::new(),
                contravariant_below_top: Vec::new(),
                holds: true,
            });
        }
        let d = self.d();
        let yi = self.object(y);
        let mut z = self.model().complex(yi);
        let mut ts: Vec<ProjComplex> = Vec::new();
        let mut phis: Vec<Vec<Scalar>> = Vec::new();
        let mut zs: Vec<ProjComplex> = Vec::new();
        let mut projs: Vec<Vec<Scalar>> = Vec::new();
        let mut terms = Vec::new();
        for _ in 0..d - 1 {
            let (t, phi, summands) = self.approximation(set, &z);
            let (w, proj) = cocone(&t, &z, &phi);
            if !w.is_complex() {
                return Err(ClusterError::ApproximationFailure("cocone is not a complex".into()));
            }
            let mut s = summands;
            s.sort_unstable();
            terms.push(s);
            ts.push(t);
            phis.push(phi);
            zs.push(w.clone());
            projs.push(proj);
            z = w;
        }
        let last = zs.last().unwrap().clone();
        let last_summands = self.summands_of(&last)?;
        let last_in_set = last_summands.iter().all(|s| set.contains(s));
        terms.push(last_summands);
        ts.push(last);
        // delta_i: T_i -> T_{i-1}
        let mut deltas: Vec<Vec<Scalar>> = vec![Vec::new()];
        for i in 1..d {
            let delta = if i == d - 1 {
                projs[i - 1].clone()
            } else {
                compose(&ts[i], &zs[i - 1], &ts[i - 1].modules(), &phis[i], &projs[i - 1])
            };
            deltas.push(delta);
        }
        let mut covariant_degree0 = Vec::new();
        let mut contravariant_top = Vec::new();
        let mut contravariant_below_top = Vec::new();
        for &j in set {
            let t = self.object(j);
            let h0 = self.covariant_dim(t, &ts[0]) - self.covariant_rank(t, &ts[1], &ts[0], &deltas[1]);
            covariant_degree0.push((h0, self.orbit_hom_dim(t, yi)));
            let top_rank = self.contravariant_rank(&ts[d - 1], &ts[d - 2], &deltas[d - 1], t);
            let top = self.contravariant_dim(&ts[d - 1], t) - top_rank;
            contravariant_top.push((top, self.orbit_hom_dim(yi.shifted(1 - d as i64), t)));
            let below_in = if d >= 3 {
                self.contravariant_rank(&ts[d - 2], &ts[d - 3], &deltas[d - 2], t)
            } else {
                0
            };
            contravariant_below_top.push(self.contravariant_dim(&ts[d - 2], t) - top_rank - below_in);
        }
        let holds = last_in_set
            && covariant_degree0.iter().all(|p| p.0 == p.1)
            && contravariant_top.iter().all(|p| p.0 == p.1);
        Ok(TriangularResolution {
            target: y,
            terms,
            last_in_set,
            covariant_degree0,
            contravariant_top,
            contravariant_below_top,
            holds,
        })
    }

    /// Project a tilting complex into the cluster category and compare Hom spaces.
    pub fn tilting_to_dcluster(&self, tilt: &[Ind]) -> Result<TiltingReport, ClusterError> {
        let d = self.d();
        if d < 2 {
            return Err(ClusterError::Unsupported("needs d >= 2".into()));
        }
        let model = self.model();
        let n = model.algebra().vertex_count();
        for &t in tilt {
            if t.module >= model.module_count() {
                return Err(ClusterError::InvalidInput(format!("unknown module {}", t.module)));
            }
            if t.shift < 0 || t.shift > d as i64 - 2 {
                return Err(ClusterError::HomologyDegreeOutOfRange(model.name(t)));
            }
        }
        if tilt.len() != n {
            return Err(ClusterError::NotTilting(format!("{} summands for {n} vertices", tilt.len())));
        }
        for (a, &x) in tilt.iter().enumerate() {
            for (b, &y) in tilt.iter().enumerate() {
                if a != b && x == y {
                    return Err(ClusterError::NotTilting("repeated summand".into()));
                }
                for i in [x.shift - y.shift, x.shift - y.shift + 1] {
                    if i != 0 && model.hom_dim(x, y.shifted(i)) != 0 {
                        return Err(ClusterError::NotTilting(format!(
                            "Hom({}, {}[{i}]) != 0",
                            model.name(x),
                            model.name(y)
                        )));
                    }
                }
            }
        }
        let mut projected: Vec<usize> = tilt.iter().map(|&t| self.reduce(t).map(|r| r.0)).collect::<Result<_, _>>()?;
        projected.sort_unstable();
        let certificate = self.is_cluster_tilting(&projected)?;
        let e = endo_d(self, tilt)?;
        let endo_dimension = e.dim();
        let mut entries = Vec::new();
        for (a, &x) in tilt.iter().enumerate() {
            for (b, &y) in tilt.iter().enumerate() {
                let lhs = self.orbit_hom_dim(x, y);
                let hd = model.hom_dim(x, y);
                let ext = ext_dim(&injective(&e, a)?, &projective(&e, b)?, d);
                entries.push((a, b, lhs, hd, ext));
            }
        }
        let holds = certificate.holds && entries.iter().all(|e| e.2 == e.3 + e.4);
        Ok(TiltingReport {
            summands: tilt.to_vec(),
            projected,
            certificate,
            endo_dimension,
            entries,
            holds,
        })
    }
}

/// `End_D` of a sum of indecomposables, presented by its quiver with relations.
fn endo_d(c: &ClusterCategory, objs: &[Ind]) -> Result<Algebra, ClusterError> {
    let model = c.model();
    let field = model.algebra().field();
    let mut basis = Vec::new();
    let mut blocks = HashMap::new();
    for (a, &x) in objs.iter().enumerate() {
        for (b, &y) in objs.iter().enumerate() {
            blocks.insert((a, b), basis.len());
            for f in &model.hom_space(x, y).basis {
                basis.push((a, b, f.clone()));
            }
        }
    }
    let n = basis.len();
    let mut sc = StructureConstants::zero_algebra(field, n);
    for (i, (a, b, f)) in basis.iter().enumerate() {
        for (j, (b2, z, g)) in basis.iter().enumerate() {
            if b != b2 {
                continue;
            }
            let h = model.compose(objs[*a], objs[*b], objs[*z], f, g);
            let coords = model
                .hom_space(objs[*a], objs[*z])
                .coords(&h)
                .ok_or_else(|| ClusterError::Internal("composite is not a chain map".into()))?;
            let start = blocks[&(*a, *z)];
            for (t, x) in coords.into_iter().enumerate() {
                if !x.is_zero() {
                    sc.set(i, j, start + t, x);
                }
            }
        }
    }
    let mut idem = Vec::new();
    for (a, &x) in objs.iter().enumerate() {
        let coords = model.hom_space(x, x).coords(&model.identity(x)).unwrap();
        let mut e = vec![field.zero(); n];
        for (t, s) in coords.into_iter().enumerate() {
            e[blocks[&(a, a)] + t] = s;
        }
        idem.push(e);
    }
    let labels: Vec<String> = objs.iter().map(|&x| model.name(x)).collect();
    Ok(Arc::new(present_algebra("End_D(T)", &sc, &idem, Some(&labels))?.algebra))
}
