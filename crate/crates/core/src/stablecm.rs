//! Cohen-Macaulay tests, stable Hom spaces, Calabi-Yau dimension checks for stable
//! Cohen-Macaulay categories, preprojective algebras and endomorphism algebras of rigid modules.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{Field, Matrix, Scalar};
use crate::homalg::{
    cosyzygy, ext_dim, flatten, global_dim, gorenstein_report, hom_bar_dim, hom_underline_dim,
    injective_envelope, knit_ar_quiver, lift_from_projective, projective_cover, restrict_to_kernels,
    span_dim, HomAlgError, HomDim, SyzygyChain,
};
use crate::quiveralg::{
    build_algebra, present_algebra, quotient_algebra, AlgebraError, Presentation, Quiver, Relation,
    StructureConstants,
};
use crate::repmod::{
    decompose, direct_sum, direct_sum_of, hom_basis, hom_dim, indecomposables_isomorphic, injective, kernel,
    projective, simple, Algebra, ModuleError, ModuleMap, Representation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StableError {
    #[error(transparent)]
    HomAlg(#[from] HomAlgError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("algebra is not Gorenstein of dimension at most 1 (found {0})")]
    NotGorensteinDim1(HomDim),
    #[error("algebra is not Gorenstein within the cutoff")]
    NotGorenstein,
    #[error("algebra is not selfinjective: P_{0} is not injective")]
    NotSelfinjective(String),
    #[error("module is not rigid: dim Ext^1(M, M) = {0}")]
    NotRigid(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmKind {
    /// `Ext^i(M, P) = 0` for projectives `P`.
    Projective,
    /// `Ext^i(I, M) = 0` for injectives `I`.
    Injective,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmReport {
    pub module: String,
    pub kind: CmKind,
    pub is_cm: bool,
    pub degrees_checked: usize,
    /// First `(degree, vertex)` with a nonvanishing Ext, if any.
    pub witness: Option<(usize, usize)>,
}

fn vertex_label(a: &Algebra, v: usize) -> String {
    a.quiver().vertices()[v].to_string()
}

pub fn simple_name(a: &Algebra, v: usize) -> String {
    format!("S_{}", vertex_label(a, v))
}

/// Vanishing of `Ext^i(M, P_v)` (resp. `Ext^i(I_v, M)`) for `1 <= i <= bound`.
pub fn is_cm(m: &Representation, name: &str, kind: CmKind, bound: usize) -> CmReport {
    let a = m.algebra().clone();
    let mut witness = None;
    match kind {
        CmKind::Projective => {
            let mut chain = SyzygyChain::new(m);
            'outer: for i in 1..=bound {
                for v in 0..a.vertex_count() {
                    if chain.ext_dim(&projective(&a, v).unwrap(), i) != 0 {
                        witness = Some((i, v));
                        break 'outer;
                    }
                }
            }
        }
        CmKind::Injective => {
            'outer2: for v in 0..a.vertex_count() {
                let mut chain = SyzygyChain::new(&injective(&a, v).unwrap());
                for i in 1..=bound {
                    if chain.ext_dim(m, i) != 0 {
                        witness = Some((i, v));
                        break 'outer2;
                    }
                }
            }
        }
    }
    CmReport {
        module: name.to_string(),
        kind,
        is_cm: witness.is_none(),
        degrees_checked: bound,
        witness,
    }
}

/// `dim coker(Ext^1(J, Y) -> Ext^1(X, Y))` for a monomorphism `mono: X -> J` into an injective.
pub fn stable_ext1_underline_with(mono: &ModuleMap, y: &Representation) -> usize {
    let x = mono.source();
    let cx = projective_cover(x);
    let (omega_x, inc_x) = kernel(&cx.map);
    if omega_x.is_zero() {
        return 0;
    }
    let cj = projective_cover(mono.target());
    let (_, inc_j) = kernel(&cj.map);
    let lift = lift_from_projective(&cx.proj, &mono.compose(&cx.map), &cj.map).expect("cover is projective");
    let restricted = restrict_to_kernels(&lift, &inc_x, &inc_j).expect("lift preserves syzygies");
    let mut spans: Vec<ModuleMap> = hom_basis(inc_j.source(), y)
        .unwrap()
        .iter()
        .map(|g| g.compose(&restricted))
        .collect();
    spans.extend(hom_basis(&cx.proj.module, y).unwrap().iter().map(|h| h.compose(&inc_x)));
    hom_dim(&omega_x, y) - span_dim(&spans, x.field())
}

/// `stable_ext1_underline_with` for the minimal injective envelope.
pub fn stable_ext1_underline(x: &Representation, y: &Representation) -> usize {
    stable_ext1_underline_with(&injective_envelope(x).map, y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub x: String,
    pub y: String,
    /// `dim Ext^2(Y, X)`.
    pub lhs: usize,
    /// `dim` of stabilized `Ext^1(X, Y)`.
    pub rhs: usize,
    pub equal: bool,
}

/// Comparison `dim Ext^1(S_i, S_j)` against `dim Ext^2(S_j, S_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaiveComparison {
    pub i: String,
    pub j: String,
    pub ext1: usize,
    pub ext2: usize,
    pub equal: bool,
    /// `S_i` is not projectively CM and `S_j` is not injectively CM.
    pub exempt: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cy3Report {
    pub gorenstein_dimension: HomDim,
    pub projectively_cm: Vec<CmReport>,
    pub injectively_cm: Vec<CmReport>,
    pub duality: Vec<DualityReport>,
    pub naive: Vec<NaiveComparison>,
}

impl Cy3Report {
    pub fn duality_holds(&self) -> bool {
        self.duality.iter().all(|d| d.equal)
    }

    /// Every non-exempt naive comparison is an equality.
    pub fn naive_holds_off_exemptions(&self) -> bool {
        self.naive.iter().all(|n| n.exempt || n.equal)
    }

    pub fn exempt_pairs(&self) -> Vec<(String, String)> {
        self.naive
            .iter()
            .filter(|n| n.exempt)
            .map(|n| (n.i.clone(), n.j.clone()))
            .collect()
    }
}

/// Duality `dim Ext^2(Y, X) = dim Ext^1-underline(X, Y)` over pairs of simples,
/// for an algebra that is Gorenstein of dimension at most 1.
pub fn cy3_report(a: &Algebra, cutoff: usize) -> Result<Cy3Report, StableError> {
    let g = gorenstein_report(a, cutoff).dimension;
    if !g.at_most(1) {
        return Err(StableError::NotGorensteinDim1(g));
    }
    let n = a.vertex_count();
    let simples: Vec<Representation> = (0..n).map(|v| simple(a, v).unwrap()).collect();
    let names: Vec<String> = (0..n).map(|v| simple_name(a, v)).collect();
    let bound = 2;
    let projectively_cm: Vec<CmReport> = (0..n)
        .map(|v| is_cm(&simples[v], &names[v], CmKind::Projective, bound))
        .collect();
    let injectively_cm: Vec<CmReport> = (0..n)
        .map(|v| is_cm(&simples[v], &names[v], CmKind::Injective, bound))
        .collect();
    let mut chains: Vec<SyzygyChain> = simples.iter().map(SyzygyChain::new).collect();
    let mut ext = vec![vec![[0usize; 3]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for (deg, slot) in ext[i][j].iter_mut().enumerate().skip(1) {
                *slot = chains[i].ext_dim(&simples[j], deg);
            }
        }
    }
    let mut duality = Vec::new();
    let mut naive = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let lhs = ext[y][x][2];
            let rhs = stable_ext1_underline(&simples[x], &simples[y]);
            duality.push(DualityReport {
                x: names[x].clone(),
                y: names[y].clone(),
                lhs,
                rhs,
                equal: lhs == rhs,
            });
            naive.push(NaiveComparison {
                i: vertex_label(a, x),
                j: vertex_label(a, y),
                ext1: ext[x][y][1],
                ext2: ext[y][x][2],
                equal: ext[x][y][1] == ext[y][x][2],
                exempt: !projectively_cm[x].is_cm && !injectively_cm[y].is_cm,
            });
        }
    }
    Ok(Cy3Report {
        gorenstein_dimension: g,
        projectively_cm,
        injectively_cm,
        duality,
        naive,
    })
}

/// Iterated cosyzygies `S^0 M, S^1 M, ...`.
fn cosyzygies(m: &Representation, upto: usize) -> Vec<Representation> {
    let mut out = vec![m.clone()];
    for _ in 0..upto {
        let next = cosyzygy(out.last().unwrap());
        out.push(next);
    }
    out
}

/// `dim` of the stable Cohen-Macaulay Hom space from `X` to `S^n Y`, as
/// `Hom(S^p X, S^(n+p) Y)` modulo injectives with `p` the Gorenstein dimension.
pub fn stable_cm_hom(x: &Representation, y: &Representation, n: i64, gdim: usize) -> usize {
    let p = (gdim as i64).max(-n) as usize;
    let xs = cosyzygies(x, p);
    let ys = cosyzygies(y, (p as i64 + n) as usize);
    hom_bar_dim(&xs[p], &ys[(p as i64 + n) as usize])
}

/// `stable_cm_hom` evaluated at two consecutive stages of the colimit.
pub fn stable_cm_hom_stabilized(x: &Representation, y: &Representation, n: i64, gdim: usize) -> (usize, bool) {
    let v = stable_cm_hom(x, y, n, gdim);
    (v, v == stable_cm_hom(x, y, n, gdim + 1))
}

/// Nakayama permutation `v -> w` with `P_v ≅ I_w`, or the first vertex whose projective is not injective.
pub fn nakayama_permutation(a: &Algebra) -> Result<Vec<usize>, usize> {
    let n = a.vertex_count();
    let injs: Vec<Representation> = (0..n).map(|w| injective(a, w).unwrap()).collect();
    (0..n)
        .map(|v| {
            let p = projective(a, v).unwrap();
            injs.iter()
                .position(|i| i.dims() == p.dims() && indecomposables_isomorphic(i, &p))
                .ok_or(v)
        })
        .collect()
}

pub fn is_selfinjective(a: &Algebra) -> bool {
    nakayama_permutation(a).is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyEntry {
    pub x: String,
    pub y: String,
    pub n: usize,
    /// `dim` stable `Hom(X, S^n Y)`.
    pub lhs: usize,
    /// `dim` stable `Hom(Y, S^(d+1-n) X)`.
    pub rhs: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CySelfinjectiveReport {
    pub cy_dimension: usize,
    pub nakayama_permutation: Vec<usize>,
    pub entries: Vec<CyEntry>,
}

impl CySelfinjectiveReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.equal)
    }
}

/// Stable `(d+1)`-Calabi-Yau dimension symmetry over pairs of simples of a selfinjective algebra.
pub fn cy_selfinjective_report(a: &Algebra, d: usize) -> Result<CySelfinjectiveReport, StableError> {
    let perm = nakayama_permutation(a).map_err(|v| StableError::NotSelfinjective(vertex_label(a, v)))?;
    let n = a.vertex_count();
    let shifts: Vec<Vec<Representation>> = (0..n).map(|v| cosyzygies(&simple(a, v).unwrap(), d + 1)).collect();
    let mut entries = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for k in 0..=d + 1 {
                let lhs = hom_underline_dim(&shifts[x][0], &shifts[y][k]);
                let rhs = hom_underline_dim(&shifts[y][0], &shifts[x][d + 1 - k]);
                entries.push(CyEntry {
                    x: simple_name(a, x),
                    y: simple_name(a, y),
                    n: k,
                    lhs,
                    rhs,
                    equal: lhs == rhs,
                });
            }
        }
    }
    Ok(CySelfinjectiveReport {
        cy_dimension: d + 1,
        nakayama_permutation: perm,
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmCyReport {
    pub gorenstein_dimension: HomDim,
    pub cy_dimension: usize,
    pub entries: Vec<CyEntry>,
    /// Every value agreed with the next stage of the colimit.
    pub stabilized: bool,
}

impl CmCyReport {
    pub fn holds(&self) -> bool {
        self.stabilized && self.entries.iter().all(|e| e.equal)
    }
}

/// Calabi-Yau dimension symmetry `dim Hom(X, S^n Y) = dim Hom(Y, S^(c-n) X)` in the stable
/// Cohen-Macaulay category of a Gorenstein algebra, over pairs of simples, `c = cy_dimension`.
pub fn cm_cy_report(a: &Algebra, cy_dimension: usize, cutoff: usize) -> Result<CmCyReport, StableError> {
    let g = gorenstein_report(a, cutoff).dimension;
    let gdim = g.finite().ok_or(StableError::NotGorenstein)?;
    let n = a.vertex_count();
    let simples: Vec<Representation> = (0..n).map(|v| simple(a, v).unwrap()).collect();
    let mut entries = Vec::new();
    let mut stabilized = true;
    for x in 0..n {
        for y in 0..n {
            for k in 0..=cy_dimension {
                let (lhs, s1) = stable_cm_hom_stabilized(&simples[x], &simples[y], k as i64, gdim);
                let (rhs, s2) =
                    stable_cm_hom_stabilized(&simples[y], &simples[x], (cy_dimension - k) as i64, gdim);
                stabilized &= s1 && s2;
                entries.push(CyEntry {
                    x: simple_name(a, x),
                    y: simple_name(a, y),
                    n: k,
                    lhs,
                    rhs,
                    equal: lhs == rhs,
                });
            }
        }
    }
    Ok(CmCyReport {
        gorenstein_dimension: g,
        cy_dimension,
        entries,
        stabilized,
    })
}

/// Preprojective algebra of type `A_n`: arrows `a{i}: i -> i+1` and `b{i}: i+1 -> i`, with
/// `a{i}*b{i} - b{i-1}*a{i-1} = 0` at each vertex `i` (terms absent at the ends).
pub fn preprojective_algebra(n: usize, field: Field) -> Result<Algebra, StableError> {
    if n == 0 {
        return Err(StableError::InvalidInput("preprojective algebra needs n >= 1".into()));
    }
    let mut q = Quiver::numbered(n);
    for i in 1..n {
        q.add_arrow(&format!("a{i}"), &i.to_string(), &(i + 1).to_string())?;
        q.add_arrow(&format!("b{i}"), &(i + 1).to_string(), &i.to_string())?;
    }
    let mut rels = Vec::new();
    for i in 1..=n {
        let mut terms = Vec::new();
        if i < n {
            terms.push((field.one(), q.path(&[&format!("a{i}"), &format!("b{i}")])?));
        }
        if i > 1 {
            let j = i - 1;
            terms.push((-field.one(), q.path(&[&format!("b{j}"), &format!("a{j}")])?));
        }
        if !terms.is_empty() {
            rels.push(Relation::new(terms)?);
        }
    }
    Ok(Arc::new(build_algebra(&format!("Pi(A_{n})"), field, q, rels, 30)?))
}

/// `End(M)` for `M` the direct sum of the given indecomposables, with product `x*y = y∘x`,
/// so that `e_i End e_j = Hom(M_i, M_j)`.
#[derive(Clone, Debug)]
pub struct EndoAlgebra {
    pub summands: Vec<Representation>,
    pub structure: StructureConstants,
    pub idempotents: Vec<Vec<Scalar>>,
    /// Basis maps per block `(i, j)`; global basis is the blocks in row-major order.
    pub blocks: Vec<Vec<Vec<ModuleMap>>>,
    offsets: Vec<Vec<usize>>,
}

impl EndoAlgebra {
    pub fn new(summands: &[Representation]) -> Result<EndoAlgebra, StableError> {
        let r = summands.len();
        let field = summands
            .first()
            .map(|m| m.field())
            .ok_or_else(|| StableError::InvalidInput("no summands".into()))?;
        let mut blocks = Vec::with_capacity(r);
        let mut offsets = vec![vec![0; r]; r];
        let mut dim = 0;
        for i in 0..r {
            let mut row = Vec::with_capacity(r);
            for j in 0..r {
                offsets[i][j] = dim;
                let b = hom_basis(&summands[i], &summands[j])?;
                dim += b.len();
                row.push(b);
            }
            blocks.push(row);
        }
        let mut sc = StructureConstants::zero_algebra(field, dim);
        // coordinates of maps in each block
        let systems: Vec<Vec<Matrix>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|k| {
                        let len = flatten(&ModuleMap::zero(&summands[i], &summands[k])).len();
                        Matrix::from_columns(field, len, &blocks[i][k].iter().map(flatten).collect::<Vec<_>>())
                    })
                    .collect()
            })
            .collect();
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for (s, x) in blocks[i][j].iter().enumerate() {
                        for (t, y) in blocks[j][k].iter().enumerate() {
                            let prod = flatten(&y.compose(x));
                            if prod.iter().all(Scalar::is_zero) {
                                continue;
                            }
                            let sys = &systems[i][k];
                            let rhs = Matrix::from_columns(field, prod.len(), &[prod]);
                            let coords = sys
                                .solve(&rhs)
                                .map_err(|e| StableError::InvalidInput(e.to_string()))?
                                .ok_or_else(|| StableError::InvalidInput("composition outside the Hom basis".into()))?;
                            for (u, c) in coords.column(0).into_iter().enumerate() {
                                if !c.is_zero() {
                                    sc.set(offsets[i][j] + s, offsets[j][k] + t, offsets[i][k] + u, c);
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut idempotents = Vec::with_capacity(r);
        for i in 0..r {
            let id = flatten(&summands[i].identity());
            let rhs = Matrix::from_columns(field, id.len(), &[id]);
            let coords = systems[i][i].solve(&rhs).unwrap().expect("identity is an endomorphism");
            let mut e = vec![field.zero(); dim];
            for (u, c) in coords.column(0).into_iter().enumerate() {
                e[offsets[i][i] + u] = c;
            }
            idempotents.push(e);
        }
        Ok(EndoAlgebra {
            summands: summands.to_vec(),
            structure: sc,
            idempotents,
            blocks,
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.structure.dim
    }

    /// Span (as columns over the global basis) of maps factoring through projectives.
    pub fn projective_ideal(&self) -> Matrix {
        let r = self.summands.len();
        let field = self.structure.field;
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        for j in 0..r {
            let cover = projective_cover(&self.summands[j]);
            for i in 0..r {
                if self.blocks[i][j].is_empty() {
                    continue;
                }
                let through: Vec<ModuleMap> = hom_basis(&self.summands[i], &cover.proj.module)
                    .unwrap()
                    .iter()
                    .map(|h| cover.map.compose(h))
                    .collect();
                let len = flatten(&ModuleMap::zero(&self.summands[i], &self.summands[j])).len();
                let sys = Matrix::from_columns(field, len, &self.blocks[i][j].iter().map(flatten).collect::<Vec<_>>());
                for t in through {
                    let rhs = Matrix::from_columns(field, len, &[flatten(&t)]);
                    let coords = sys.solve(&rhs).unwrap().expect("map lies in the Hom space");
                    let mut v = vec![field.zero(); self.dim()];
                    for (u, c) in coords.column(0).into_iter().enumerate() {
                        v[self.offsets[i][j] + u] = c;
                    }
                    cols.push(v);
                }
            }
        }
        Matrix::from_columns(field, self.dim(), &cols).column_space()
    }
}

/// Quiver with relations of `End(M)`.
pub fn endo_algebra(name: &str, summands: &[Representation]) -> Result<Presentation, StableError> {
    let e = EndoAlgebra::new(summands)?;
    Ok(present_algebra(name, &e.structure, &e.idempotents, None)?)
}

/// `End(M)` modulo maps factoring through projectives, presented by quiver with relations.
/// Summands are the indecomposable summands of `M`, pairwise non-isomorphic.
pub fn stable_endo_algebra(name: &str, summands: &[Representation]) -> Result<Presentation, StableError> {
    let e = EndoAlgebra::new(summands)?;
    let ideal = e.projective_ideal();
    let (sc, q) = quotient_algebra(&e.structure, &ideal);
    let idempotents: Vec<Vec<Scalar>> = e
        .idempotents
        .iter()
        .map(|x| q.projection.mul_vec(x))
        .filter(|x| x.iter().any(|s| !s.is_zero()))
        .collect();
    Ok(present_algebra(name, &sc, &idempotents, None)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeCyEntry {
    pub i: usize,
    pub x: String,
    pub y: String,
    /// `dim Ext^i(X, Y)`.
    pub lhs: usize,
    /// `dim Ext^(3-i)(Y, X)`.
    pub rhs: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeCyReport {
    /// Dimension vectors of the non-projective summands of `M`, in order of choice.
    pub complement: Vec<Vec<usize>>,
    /// One line per candidate considered during the greedy completion.
    pub transcript: Vec<String>,
    pub endo_dimension: usize,
    pub global_dimension: HomDim,
    /// Vertices of the endomorphism algebra belonging to non-projective summands.
    pub stable_vertices: Vec<usize>,
    pub entries: Vec<RelativeCyEntry>,
}

impl RelativeCyReport {
    pub fn holds(&self) -> bool {
        self.global_dimension.at_most(3) && self.entries.iter().all(|e| e.equal)
    }
}

fn ext1_dim_sum(parts: &[Representation]) -> usize {
    let a = parts[0].algebra();
    let m = direct_sum_of(a, parts);
    ext_dim(&m, &m, 1)
}

/// Greedy maximal rigid completion of the projectives by non-projective indecomposables.
pub fn maximal_rigid_completion(lambda: &Algebra, max_modules: usize) -> Result<(Vec<Representation>, Vec<String>), StableError> {
    let ar = knit_ar_quiver(lambda, max_modules)?;
    let mut chosen: Vec<Representation> = Vec::new();
    let mut transcript = Vec::new();
    for (i, m) in ar.modules.iter().enumerate() {
        if ar.projective_at[i].is_some() {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(m.clone());
        let e = ext1_dim_sum(&trial);
        if e == 0 {
            transcript.push(format!("add {:?}", m.dims()));
            chosen = trial;
        } else {
            transcript.push(format!("skip {:?}: dim Ext^1 = {e}", m.dims()));
        }
    }
    Ok((chosen, transcript))
}

/// Relative 3-Calabi-Yau checks for `End(Λ ⊕ C)` where `C` is a rigid complement.
/// `complement = None` runs the greedy maximal rigid completion.
pub fn relative_cy_report(
    lambda: &Algebra,
    complement: Option<Vec<Representation>>,
    cutoff: usize,
) -> Result<RelativeCyReport, StableError> {
    nakayama_permutation(lambda).map_err(|v| StableError::NotSelfinjective(vertex_label(lambda, v)))?;
    let (complement, transcript) = match complement {
        Some(c) => (c, vec!["complement supplied".to_string()]),
        None => maximal_rigid_completion(lambda, 500)?,
    };
    let n = lambda.vertex_count();
    let mut summands: Vec<Representation> = (0..n).map(|v| projective(lambda, v).unwrap()).collect();
    summands.extend(complement.iter().cloned());
    let e1 = ext1_dim_sum(&summands);
    if e1 != 0 {
        return Err(StableError::NotRigid(e1));
    }
    let pres = endo_algebra("End(M)", &summands)?;
    let e = Arc::new(pres.algebra);
    let global_dimension = global_dim(&e, cutoff);
    let stable_vertices: Vec<usize> = (n..summands.len()).collect();
    let simples: Vec<Representation> = (0..e.vertex_count()).map(|v| simple(&e, v).unwrap()).collect();
    let mut chains: Vec<SyzygyChain> = simples.iter().map(SyzygyChain::new).collect();
    let mut entries = Vec::new();
    for x in 0..e.vertex_count() {
        for &y in &stable_vertices {
            for i in 0..=3 {
                let lhs = chains[x].ext_dim(&simples[y], i);
                let rhs = chains[y].ext_dim(&simples[x], 3 - i);
                entries.push(RelativeCyEntry {
                    i,
                    x: simple_name(&e, x),
                    y: simple_name(&e, y),
                    lhs,
                    rhs,
                    equal: lhs == rhs,
                });
            }
        }
    }
    Ok(RelativeCyReport {
        complement: complement.iter().map(|m| m.dims().to_vec()).collect(),
        transcript,
        endo_dimension: e.dim(),
        global_dimension,
        stable_vertices,
        entries,
    })
}

/// A second monomorphism into an injective: the envelope followed by inclusion into `E ⊕ I_v`.
pub fn padded_envelope(x: &Representation, extra_vertex: usize) -> ModuleMap {
    let env = injective_envelope(x);
    let extra = injective(x.algebra(), extra_vertex).unwrap();
    let (_, incs, _) = direct_sum(x.algebra(), &[&env.inj.module, &extra]);
    incs[0].compose(&env.map)
}

/// Indecomposable summands of `M`, one per isomorphism class.
pub fn basic_summands(m: &Representation) -> Result<Vec<Representation>, StableError> {
    Ok(decompose(m)?.classes.into_iter().map(|(r, _)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn a4() -> Algebra {
        let mut q = Quiver::numbered(4);
        q.add_arrow("delta", "1", "2").unwrap();
        q.add_arrow("alpha", "2", "3").unwrap();
        q.add_arrow("beta", "3", "4").unwrap();
        q.add_arrow("gamma", "4", "2").unwrap();
        let rels = [["alpha", "beta"], ["beta", "gamma"], ["gamma", "alpha"]]
            .iter()
            .map(|p| Relation::zero(q.path(p).unwrap(), Q).unwrap())
            .collect();
        Arc::new(build_algebra("A4", Q, q, rels, 30).unwrap())
    }

    fn cyclic_rad2(n: usize) -> Algebra {
        let mut q = Quiver::numbered(n);
        for i in 1..=n {
            q.add_arrow(&format!("c{i}"), &i.to_string(), &(i % n + 1).to_string()).unwrap();
        }
        let rels = (1..=n)
            .map(|i| {
                let j = i % n + 1;
                Relation::zero(q.path(&[&format!("c{i}"), &format!("c{j}")]).unwrap(), Q).unwrap()
            })
            .collect();
        Arc::new(build_algebra("C", Q, q, rels, 30).unwrap())
    }

    #[test]
    fn a4_cohen_macaulay_simples() {
        let a = a4();
        for v in 0..4 {
            let s = simple(&a, v).unwrap();
            assert_eq!(is_cm(&s, "", CmKind::Injective, 3).is_cm, v != 0, "inj {v}");
            assert_eq!(is_cm(&s, "", CmKind::Projective, 3).is_cm, v != 1, "proj {v}");
            assert!(is_cm(&projective(&a, v).unwrap(), "", CmKind::Projective, 3).is_cm);
        }
    }

    #[test]
    fn a4_cy3() {
        let r = cy3_report(&a4(), 20).unwrap();
        assert!(r.duality_holds());
        assert!(r.naive_holds_off_exemptions());
        assert_eq!(r.exempt_pairs(), vec![("2".to_string(), "1".to_string())]);
        assert!(r.naive.iter().any(|n| n.exempt && !n.equal));
    }

    #[test]
    fn stable_ext_envelope_independent() {
        let a = a4();
        for x in 0..4 {
            let sx = simple(&a, x).unwrap();
            for y in 0..4 {
                let sy = simple(&a, y).unwrap();
                let base = stable_ext1_underline(&sx, &sy);
                for extra in 0..4 {
                    assert_eq!(stable_ext1_underline_with(&padded_envelope(&sx, extra), &sy), base);
                }
            }
            assert_eq!(stable_ext1_underline(&injective(&a, x).unwrap(), &sx), 0);
            assert_eq!(stable_ext1_underline(&projective(&a, x).unwrap(), &sx), 0);
        }
    }

    #[test]
    fn cyclic_selfinjective_cy() {
        let a = cyclic_rad2(4);
        assert!(is_selfinjective(&a));
        let r = cy_selfinjective_report(&a, 3).unwrap();
        assert!(r.holds());
        assert!(matches!(cy_selfinjective_report(&a4(), 2), Err(StableError::NotSelfinjective(_))));
        // stable Hom is shift invariant
        let s0 = simple(&a, 0).unwrap();
        let s1 = simple(&a, 1).unwrap();
        for n in 0..3 {
            assert_eq!(stable_cm_hom(&s0, &s1, n, 0), stable_cm_hom(&cosyzygy(&s0), &cosyzygy(&s1), n, 0));
        }
    }

    #[test]
    fn preprojective_small() {
        assert_eq!(preprojective_algebra(1, Q).unwrap().dim(), 1);
        let p2 = preprojective_algebra(2, Q).unwrap();
        assert_eq!(p2.dim(), 4);
        assert!(is_selfinjective(&p2));
        let p3 = preprojective_algebra(3, Q).unwrap();
        assert_eq!(p3.dim(), 10);
        assert!(is_selfinjective(&p3));
    }

    #[test]
    fn relative_cy_preprojective_a2() {
        let l = preprojective_algebra(2, Q).unwrap();
        let r = relative_cy_report(&l, None, 20).unwrap();
        assert_eq!(r.complement.len(), 1);
        assert_eq!(r.global_dimension, HomDim::Finite(3));
        assert!(r.holds());
        let empty = relative_cy_report(&l, Some(vec![]), 20).unwrap();
        assert!(empty.entries.is_empty());
        let (c, _) = maximal_rigid_completion(&l, 50).unwrap();
        let st = stable_endo_algebra("st", &c).unwrap();
        assert_eq!(st.algebra.dim(), 1);
    }

    #[test]
    fn endo_algebra_of_projectives_is_algebra() {
        let a = a4();
        let ps: Vec<Representation> = (0..4).map(|v| projective(&a, v).unwrap()).collect();
        let e = endo_algebra("E", &ps).unwrap();
        assert_eq!(e.algebra.dim(), a.dim());
        assert_eq!(e.arrows.iter().flatten().sum::<usize>(), 4);
        assert_eq!(e.relations.iter().flatten().sum::<usize>(), 3);
    }

    #[test]
    fn cm_symmetry_on_a4_fixture() {
        let r = cm_cy_report(&a4(), 3, 20).unwrap();
        assert_eq!(r.gorenstein_dimension, HomDim::Finite(1));
        assert!(r.holds());
        assert!(!cm_cy_report(&a4(), 2, 20).unwrap().holds());
        let c = cm_cy_report(&cyclic_rad2(4), 4, 20).unwrap();
        assert!(c.holds());
    }
}
