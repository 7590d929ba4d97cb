//! Modules over bound quiver algebras as contravariant representations.
//!
//! An arrow `a: s -> t` acts by a matrix of shape `dim(s) x dim(t)`, i.e. a map `V_t -> V_s`.
//! A path `a1*...*ak` acts by the product `M_a1 * ... * M_ak`. Maps act on column vectors and
//! `g.compose(&f)` applies `f` first.

use std::sync::Arc;

use thiserror::Error;

use crate::exactlin::{rational_roots, Field, Matrix, Quotient, Scalar};
use crate::quiveralg::{BoundQuiverAlgebra, Path};

pub type Algebra = Arc<BoundQuiverAlgebra>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("relation `{0}` is not satisfied")]
    RelationViolated(String),
    #[error("map is not natural with respect to arrow `{0}`")]
    NotNatural(String),
    #[error("could not split a decomposable module: {0}")]
    SplitFailure(String),
}

#[derive(Clone, Debug)]
pub struct Representation {
    algebra: Algebra,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Representation {
    pub fn new(algebra: Algebra, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Representation, ModuleError> {
        let q = algebra.quiver();
        if dims.len() != q.vertex_count() || maps.len() != q.arrow_count() {
            return Err(ModuleError::Shape("wrong number of vertices or arrows".into()));
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            if m.rows() != dims[a.source] || m.cols() != dims[a.target] || m.field() != algebra.field() {
                return Err(ModuleError::Shape(format!(
                    "arrow `{}` needs a {}x{} matrix, got {}x{}",
                    a.name,
                    dims[a.source],
                    dims[a.target],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let rep = Representation { algebra, dims, maps };
        for r in rep.algebra.relations() {
            let mut acc = Matrix::zeros(rep.field(), rep.dims[r.source()], rep.dims[r.target()]);
            for (c, p) in r.terms() {
                acc = &acc + &rep.path_action(p).scale(c);
            }
            if !acc.is_zero() {
                return Err(ModuleError::RelationViolated(r.display(rep.algebra.quiver())));
            }
        }
        Ok(rep)
    }

    fn new_unchecked(algebra: Algebra, dims: Vec<usize>, maps: Vec<Matrix>) -> Representation {
        debug_assert!(Representation::new(algebra.clone(), dims.clone(), maps.clone()).is_ok());
        Representation { algebra, dims, maps }
    }

    pub fn zero(algebra: &Algebra) -> Representation {
        let n = algebra.vertex_count();
        Representation::from_dims_zero(algebra, vec![0; n])
    }

    fn from_dims_zero(algebra: &Algebra, dims: Vec<usize>) -> Representation {
        let f = algebra.field();
        let maps = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(f, dims[a.source], dims[a.target]))
            .collect();
        Representation {
            algebra: algebra.clone(),
            dims,
            maps,
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_map(&self, a: usize) -> &Matrix {
        &self.maps[a]
    }

    pub fn arrow_maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Offset of vertex `v` in the global basis (vertices in order).
    pub fn offset(&self, v: usize) -> usize {
        self.dims[..v].iter().sum()
    }

    /// Action of a path, a map `V_target -> V_source`.
    pub fn path_action(&self, p: &Path) -> Matrix {
        if p.is_trivial() {
            return Matrix::identity(self.field(), self.dims[p.source()]);
        }
        let mut acc = self.maps[p.arrows()[0]].clone();
        for &a in &p.arrows()[1..] {
            acc = &acc * &self.maps[a];
        }
        acc
    }

    /// Action of the basis path with index `i`.
    pub fn basis_action(&self, i: usize) -> Matrix {
        self.path_action(&self.algebra.basis()[i])
    }

    fn check_same(&self, other: &Representation) -> Result<(), ModuleError> {
        if self.algebra.same_as(&other.algebra) {
            Ok(())
        } else {
            Err(ModuleError::AlgebraMismatch)
        }
    }

    /// Dual module over the opposite algebra (transposed matrices).
    pub fn dual(&self) -> Representation {
        let op = self.algebra.opposite();
        let maps = self.maps.iter().map(Matrix::transpose).collect();
        Representation::new_unchecked(op, self.dims.clone(), maps)
    }

    /// Same data viewed over an equal algebra handle.
    pub fn rebase(&self, algebra: &Algebra) -> Representation {
        assert!(self.algebra.same_as(algebra));
        Representation {
            algebra: algebra.clone(),
            dims: self.dims.clone(),
            maps: self.maps.clone(),
        }
    }

    pub fn identity(&self) -> ModuleMap {
        ModuleMap {
            source: self.clone(),
            target: self.clone(),
            comps: self.dims.iter().map(|&d| Matrix::identity(self.field(), d)).collect(),
        }
    }

    pub fn zero_map_to(&self, target: &Representation) -> ModuleMap {
        ModuleMap::zero(self, target)
    }

    /// Structural equality of the data (same basis, same matrices).
    pub fn same_data(&self, other: &Representation) -> bool {
        self.algebra.same_as(&other.algebra) && self.dims == other.dims && self.maps == other.maps
    }
}

/// A module homomorphism given vertexwise; `comps[v]` is `dim N_v x dim M_v`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    source: Representation,
    target: Representation,
    comps: Vec<Matrix>,
}

impl ModuleMap {
    pub fn new(source: &Representation, target: &Representation, comps: Vec<Matrix>) -> Result<ModuleMap, ModuleError> {
        source.check_same(target)?;
        if comps.len() != source.dims.len() {
            return Err(ModuleError::Shape("one component per vertex".into()));
        }
        for (v, c) in comps.iter().enumerate() {
            if c.rows() != target.dims[v] || c.cols() != source.dims[v] {
                return Err(ModuleError::Shape(format!("component at vertex {v}")));
            }
        }
        let f = ModuleMap {
            source: source.clone(),
            target: target.clone(),
            comps,
        };
        for (a, arr) in source.algebra.quiver().arrows().iter().enumerate() {
            let lhs = &f.comps[arr.source] * &source.maps[a];
            let rhs = &target.maps[a] * &f.comps[arr.target];
            if lhs != rhs {
                return Err(ModuleError::NotNatural(arr.name.clone()));
            }
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: &Representation, target: &Representation, comps: Vec<Matrix>) -> ModuleMap {
        let f = ModuleMap {
            source: source.clone(),
            target: target.clone(),
            comps,
        };
        debug_assert!(f.is_natural(), "unnatural map constructed");
        f
    }

    pub fn zero(source: &Representation, target: &Representation) -> ModuleMap {
        let f = source.field();
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            comps: (0..source.dims.len())
                .map(|v| Matrix::zeros(f, target.dims[v], source.dims[v]))
                .collect(),
        }
    }

    /// Map from the global block matrix `dim N x dim M` (must be block diagonal by vertex).
    pub fn from_global(source: &Representation, target: &Representation, m: &Matrix) -> ModuleMap {
        let comps = (0..source.dims.len())
            .map(|v| m.block(target.offset(v), source.offset(v), target.dims[v], source.dims[v]))
            .collect();
        ModuleMap::new_unchecked(source, target, comps)
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn comps(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn comp(&self, v: usize) -> &Matrix {
        &self.comps[v]
    }

    pub fn is_natural(&self) -> bool {
        self.source
            .algebra
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .all(|(a, arr)| {
                &self.comps[arr.source] * &self.source.maps[a] == &self.target.maps[a] * &self.comps[arr.target]
            })
    }

    /// Block-diagonal global matrix.
    pub fn global(&self) -> Matrix {
        let refs: Vec<&Matrix> = self.comps.iter().collect();
        Matrix::block_diag(self.source.field(), &refs)
    }

    /// `self` after `f` (apply `f` first).
    pub fn compose(&self, f: &ModuleMap) -> ModuleMap {
        assert_eq!(f.target.dims, self.source.dims, "composition shape mismatch");
        ModuleMap {
            source: f.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&f.comps).map(|(g, f)| g * f).collect(),
        }
    }

    pub fn add(&self, o: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.comps.iter().map(Matrix::rank).sum()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dims == self.target.dims && self.comps.iter().all(Matrix::is_invertible)
    }

    pub fn is_mono(&self) -> bool {
        self.rank() == self.source.total_dim()
    }

    pub fn is_epi(&self) -> bool {
        self.rank() == self.target.total_dim()
    }

    /// Replace source and target by equal-data modules (used after rebasing).
    pub fn with_ends(&self, source: &Representation, target: &Representation) -> ModuleMap {
        assert_eq!(source.dims, self.source.dims);
        assert_eq!(target.dims, self.target.dims);
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            comps: self.comps.clone(),
        }
    }

    /// Dual map `DN -> DM` over the opposite algebra.
    pub fn dual(&self) -> ModuleMap {
        ModuleMap {
            source: self.target.dual(),
            target: self.source.dual(),
            comps: self.comps.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Linear combination of maps with the same ends.
    pub fn combination(maps: &[ModuleMap], coeffs: &[Scalar], source: &Representation, target: &Representation) -> ModuleMap {
        let mut acc = ModuleMap::zero(source, target);
        for (m, c) in maps.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }
}

pub fn simple(a: &Algebra, v: usize) -> Result<Representation, ModuleError> {
    if v >= a.vertex_count() {
        return Err(ModuleError::UnknownVertex(v));
    }
    let mut dims = vec![0; a.vertex_count()];
    dims[v] = 1;
    Ok(Representation::from_dims_zero(a, dims))
}

/// `P_v`: paths ending at `v`, graded by source; arrows act by left multiplication.
pub fn projective(a: &Algebra, v: usize) -> Result<Representation, ModuleError> {
    if v >= a.vertex_count() {
        return Err(ModuleError::UnknownVertex(v));
    }
    let f = a.field();
    let by_vertex: Vec<Vec<usize>> = (0..a.vertex_count()).map(|u| a.paths_between(u, v)).collect();
    let dims: Vec<usize> = by_vertex.iter().map(Vec::len).collect();
    let mut maps = Vec::new();
    for arr in a.quiver().arrows() {
        let (s, t) = (arr.source, arr.target);
        let mut m = Matrix::zeros(f, dims[s], dims[t]);
        let arrow_path = Path::from_arrows(a.quiver(), vec![a.quiver().arrow(&arr.name).unwrap()]).unwrap();
        for (col, &p) in by_vertex[t].iter().enumerate() {
            let prod = arrow_path.then(&a.basis()[p]).expect("composable");
            for (k, c) in a.normal_form(&prod) {
                let row = by_vertex[s].iter().position(|&x| x == k).expect("graded");
                m.set(row, col, c);
            }
        }
        maps.push(m);
    }
    Ok(Representation::new_unchecked(a.clone(), dims, maps))
}

/// `I_v`: dual of the paths starting at `v`, graded by target.
pub fn injective(a: &Algebra, v: usize) -> Result<Representation, ModuleError> {
    if v >= a.vertex_count() {
        return Err(ModuleError::UnknownVertex(v));
    }
    let f = a.field();
    let by_vertex: Vec<Vec<usize>> = (0..a.vertex_count()).map(|u| a.paths_between(v, u)).collect();
    let dims: Vec<usize> = by_vertex.iter().map(Vec::len).collect();
    let mut maps = Vec::new();
    for (ai, arr) in a.quiver().arrows().iter().enumerate() {
        let (s, t) = (arr.source, arr.target);
        let arrow_path = Path::from_arrows(a.quiver(), vec![ai]).unwrap();
        let mut m = Matrix::zeros(f, dims[s], dims[t]);
        for (row, &q) in by_vertex[s].iter().enumerate() {
            let prod = a.basis()[q].then(&arrow_path).expect("composable");
            for (k, c) in a.normal_form(&prod) {
                let col = by_vertex[t].iter().position(|&x| x == k).expect("graded");
                m.set(row, col, c);
            }
        }
        maps.push(m);
    }
    Ok(Representation::new_unchecked(a.clone(), dims, maps))
}

/// The map `P_v -> M` sending the generator `e_v` to `m` (a vector in `M_v`).
pub fn map_from_projective(pv: &Representation, v: usize, m_target: &Representation, m: &[Scalar]) -> ModuleMap {
    let a = pv.algebra();
    let f = a.field();
    let comps = (0..a.vertex_count())
        .map(|u| {
            let cols: Vec<Vec<Scalar>> = a
                .paths_between(u, v)
                .into_iter()
                .map(|p| m_target.basis_action(p).mul_vec(m))
                .collect();
            Matrix::from_columns(f, m_target.dims[u], &cols)
        })
        .collect();
    ModuleMap::new_unchecked(pv, m_target, comps)
}

/// The map `M -> I_v` induced by the functional `phi: M_v -> k`.
pub fn map_to_injective(m_source: &Representation, iv: &Representation, v: usize, phi: &[Scalar]) -> ModuleMap {
    let a = iv.algebra();
    let f = a.field();
    let row = Matrix::from_vec(f, 1, phi.len(), phi.to_vec()).unwrap();
    let comps = (0..a.vertex_count())
        .map(|u| {
            let rows: Vec<Matrix> = a
                .paths_between(v, u)
                .into_iter()
                .map(|q| &row * &m_source.basis_action(q))
                .collect();
            let mut out = Matrix::zeros(f, 0, m_source.dims[u]);
            for r in rows {
                out = out.vstack(&r);
            }
            out
        })
        .collect();
    ModuleMap::new_unchecked(m_source, iv, comps)
}

/// Basis of `Hom(M, N)` by solving the naturality equations.
pub fn hom_basis(m: &Representation, n: &Representation) -> Result<Vec<ModuleMap>, ModuleError> {
    m.check_same(n)?;
    let f = m.field();
    let nv = m.dims.len();
    // unknown offsets for each vertex block (row-major f_v entries)
    let mut off = vec![0; nv + 1];
    for v in 0..nv {
        off[v + 1] = off[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = off[nv];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (ai, arr) in m.algebra.quiver().arrows().iter().enumerate() {
        let (s, t) = (arr.source, arr.target);
        let ma = &m.maps[ai];
        let na = &n.maps[ai];
        // (f_s M_a - N_a f_t)[i][j] = sum_k f_s[i][k] M_a[k][j] - sum_l N_a[i][l] f_t[l][j]
        for i in 0..n.dims[s] {
            for j in 0..m.dims[t] {
                let mut row = vec![f.zero(); unknowns];
                let mut nonzero = false;
                for k in 0..m.dims[s] {
                    let c = ma.get(k, j);
                    if !c.is_zero() {
                        let idx = off[s] + i * m.dims[s] + k;
                        row[idx] = &row[idx] + c;
                        nonzero = true;
                    }
                }
                for l in 0..n.dims[t] {
                    let c = na.get(i, l);
                    if !c.is_zero() {
                        let idx = off[t] + l * m.dims[t] + j;
                        row[idx] = &row[idx] - c;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zeros(f, 0, unknowns)
    } else {
        Matrix::from_rows(f, &rows).expect("rectangular")
    };
    let ker = system.kernel_basis();
    Ok(ker
        .columns()
        .into_iter()
        .map(|col| {
            let comps = (0..nv)
                .map(|v| Matrix::from_vec(f, n.dims[v], m.dims[v], col[off[v]..off[v + 1]].to_vec()).unwrap())
                .collect();
            ModuleMap::new_unchecked(m, n, comps)
        })
        .collect())
}

pub fn hom_dim(m: &Representation, n: &Representation) -> usize {
    hom_basis(m, n).map(|b| b.len()).unwrap_or(0)
}

/// Submodule spanned vertexwise by the columns of `spans` (assumed closed under the action).
pub fn submodule(m: &Representation, spans: &[Matrix]) -> (Representation, ModuleMap) {
    let f = m.field();
    let bases: Vec<Matrix> = spans.iter().map(Matrix::column_space).collect();
    let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
    let maps = m
        .algebra
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, arr)| {
            let img = &m.maps[ai] * &bases[arr.target];
            bases[arr.source]
                .solve(&img)
                .expect("same field")
                .unwrap_or_else(|| panic!("subspace not closed under arrow `{}`", arr.name))
        })
        .collect();
    let sub = Representation::new_unchecked(m.algebra.clone(), dims, maps);
    let _ = f;
    let inc = ModuleMap::new_unchecked(&sub, m, bases);
    (sub, inc)
}

/// Quotient of `m` by the submodule spanned vertexwise by `spans`.
pub fn quotient_module(m: &Representation, spans: &[Matrix]) -> (Representation, ModuleMap) {
    let f = m.field();
    let qs: Vec<Quotient> = spans
        .iter()
        .enumerate()
        .map(|(v, s)| Quotient::of(f, m.dims[v], s))
        .collect();
    let dims: Vec<usize> = qs.iter().map(Quotient::dim).collect();
    let maps = m
        .algebra
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, arr)| &(&qs[arr.source].projection * &m.maps[ai]) * &qs[arr.target].section)
        .collect();
    let quo = Representation::new_unchecked(m.algebra.clone(), dims, maps);
    let proj = ModuleMap::new_unchecked(m, &quo, qs.into_iter().map(|q| q.projection).collect());
    (quo, proj)
}

pub fn kernel(f: &ModuleMap) -> (Representation, ModuleMap) {
    let spans: Vec<Matrix> = f.comps.iter().map(Matrix::kernel_basis).collect();
    submodule(&f.source, &spans)
}

pub fn cokernel(f: &ModuleMap) -> (Representation, ModuleMap) {
    quotient_module(&f.target, &f.comps)
}

/// Image with its inclusion into the target and the corestriction of `f`.
pub fn image(f: &ModuleMap) -> (Representation, ModuleMap, ModuleMap) {
    let (im, inc) = submodule(&f.target, &f.comps);
    let corestriction = (0..f.comps.len())
        .map(|v| inc.comps[v].solve(&f.comps[v]).unwrap().expect("image contains columns"))
        .collect();
    let co = ModuleMap::new_unchecked(&f.source, &im, corestriction);
    (im, inc, co)
}

/// Radical: sum of the images of all arrows.
pub fn radical(m: &Representation) -> (Representation, ModuleMap) {
    submodule(m, &radical_spans(m))
}

fn radical_spans(m: &Representation) -> Vec<Matrix> {
    let f = m.field();
    let mut spans: Vec<Matrix> = m.dims.iter().map(|&d| Matrix::zeros(f, d, 0)).collect();
    for (ai, arr) in m.algebra.quiver().arrows().iter().enumerate() {
        spans[arr.source] = spans[arr.source].hstack(&m.maps[ai]);
    }
    spans
}

/// Top `M / rad M` with the projection.
pub fn top(m: &Representation) -> (Representation, ModuleMap) {
    quotient_module(m, &radical_spans(m))
}

/// Socle: vectors killed by every arrow leaving their vertex.
pub fn socle(m: &Representation) -> (Representation, ModuleMap) {
    let f = m.field();
    let mut stacks: Vec<Matrix> = m.dims.iter().map(|&d| Matrix::zeros(f, 0, d)).collect();
    for (ai, arr) in m.algebra.quiver().arrows().iter().enumerate() {
        stacks[arr.target] = stacks[arr.target].vstack(&m.maps[ai]);
    }
    let spans: Vec<Matrix> = stacks.iter().map(Matrix::kernel_basis).collect();
    submodule(m, &spans)
}

/// Direct sum with canonical inclusions and projections.
pub fn direct_sum(algebra: &Algebra, parts: &[&Representation]) -> (Representation, Vec<ModuleMap>, Vec<ModuleMap>) {
    let f = algebra.field();
    let nv = algebra.vertex_count();
    let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
    let maps = (0..algebra.quiver().arrow_count())
        .map(|a| {
            let blocks: Vec<&Matrix> = parts.iter().map(|p| &p.maps[a]).collect();
            Matrix::block_diag(f, &blocks)
        })
        .collect();
    let sum = Representation::new_unchecked(algebra.clone(), dims.clone(), maps);
    let mut incs = Vec::new();
    let mut projs = Vec::new();
    let mut offs = vec![0; nv];
    for p in parts {
        let mut ic = Vec::new();
        let mut pc = Vec::new();
        for v in 0..nv {
            let mut i = Matrix::zeros(f, dims[v], p.dims[v]);
            i.set_block(offs[v], 0, &Matrix::identity(f, p.dims[v]));
            pc.push(i.transpose());
            ic.push(i);
            offs[v] += p.dims[v];
        }
        incs.push(ModuleMap::new_unchecked(p, &sum, ic));
        projs.push(ModuleMap::new_unchecked(&sum, p, pc));
    }
    (sum, incs, projs)
}

pub fn direct_sum_of(algebra: &Algebra, parts: &[Representation]) -> Representation {
    let refs: Vec<&Representation> = parts.iter().collect();
    direct_sum(algebra, &refs).0
}

/// One indecomposable summand with its split inclusion and projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Representation,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

/// Summands grouped by isomorphism class.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub classes: Vec<(Representation, usize)>,
    pub summands: Vec<Summand>,
    /// `class_of[i]`: class index of `summands[i]`.
    pub class_of: Vec<usize>,
}

impl Decomposition {
    pub fn summand_count(&self) -> usize {
        self.summands.len()
    }

    pub fn is_indecomposable(&self) -> bool {
        self.summands.len() == 1
    }
}

/// Local endomorphism ring test via the trace form: `rad End = {x : tr(xy) = 0 for all y}`.
fn radical_of_endomorphisms(ends: &[Matrix]) -> Matrix {
    let f = ends.first().map_or(Field::Rational, Matrix::field);
    let k = ends.len();
    let mut gram = Matrix::zeros(f, k, k);
    for i in 0..k {
        for j in i..k {
            let t = (&ends[i] * &ends[j]).trace();
            gram.set(i, j, t.clone());
            gram.set(j, i, t);
        }
    }
    gram.kernel_basis()
}

/// Minimal polynomial (constant term first) of a square matrix.
fn minimal_polynomial(x: &Matrix) -> Vec<Scalar> {
    let f = x.field();
    let n = x.rows();
    let mut powers: Vec<Vec<Scalar>> = vec![Matrix::identity(f, n).entries().to_vec()];
    let mut p = Matrix::identity(f, n);
    loop {
        p = &p * x;
        let cols = powers.clone();
        let a = Matrix::from_columns(f, n * n, &cols);
        let b = Matrix::from_columns(f, n * n, &[p.entries().to_vec()]);
        if let Some(sol) = a.solve(&b).expect("shapes") {
            let mut poly: Vec<Scalar> = sol.column(0).into_iter().map(|c| -&c).collect();
            poly.push(f.one());
            return poly;
        }
        powers.push(p.entries().to_vec());
    }
}

/// Fitting splitting `M = ker phi^N + im phi^N` when `phi` is neither nilpotent nor invertible.
fn fitting_split(m: &Representation, phi: &Matrix) -> Option<(Representation, ModuleMap, Representation, ModuleMap)> {
    let n = m.total_dim();
    let pn = phi.pow(n);
    let r = pn.rank();
    if r == 0 || r == n {
        return None;
    }
    let map = ModuleMap::from_global(m, m, &pn);
    let (k, kinc) = kernel(&map);
    let (i, iinc, _) = image(&map);
    Some((k, kinc, i, iinc))
}

/// Split `m` into indecomposables; returns summands with inclusion/projection into `m`.
fn split(m: &Representation) -> Result<Vec<Summand>, ModuleError> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    let ends: Vec<Matrix> = hom_basis(m, m)?.iter().map(ModuleMap::global).collect();
    let f = m.field();
    if f.characteristic() != 0 && (m.total_dim() as u64) >= f.characteristic() {
        return Err(ModuleError::SplitFailure(
            "field characteristic too small for the trace-form radical".into(),
        ));
    }
    let rad = radical_of_endomorphisms(&ends);
    if ends.len() - rad.cols() == 1 {
        return Ok(vec![Summand {
            module: m.clone(),
            inclusion: m.identity(),
            projection: m.identity(),
        }]);
    }
    let n = m.total_dim();
    let mut candidates: Vec<Matrix> = ends.clone();
    for i in 0..ends.len() {
        for j in 0..ends.len() {
            candidates.push(&ends[i] * &ends[j]);
            if j > i {
                candidates.push(&ends[i] + &ends[j]);
            }
        }
    }
    // small deterministic integer combinations as a last resort
    for s in 1..=3i64 {
        let mut acc = Matrix::zeros(f, n, n);
        for (i, e) in ends.iter().enumerate() {
            let c = Scalar::from_i64((i as i64 * 7 + s * 3) % 11 - 5, f);
            acc = &acc + &e.scale(&c);
        }
        candidates.push(acc);
    }
    for x in &candidates {
        if x.is_zero() {
            continue;
        }
        for lambda in rational_roots(&minimal_polynomial(x)) {
            let phi = x - &Matrix::identity(f, n).scale(&lambda);
            if let Some((k, kinc, i, iinc)) = fitting_split(m, &phi) {
                // projections from the direct-sum decomposition m = k + i
                let basis = kinc.global().hstack(&iinc.global());
                let inv = basis.inverse().expect("Fitting decomposition is direct");
                let kd = k.total_dim();
                let kproj = ModuleMap::from_global(m, &k, &inv.select_rows(&(0..kd).collect::<Vec<_>>()));
                let iproj = ModuleMap::from_global(m, &i, &inv.select_rows(&(kd..n).collect::<Vec<_>>()));
                let mut out = Vec::new();
                for (sub, inc, proj) in [(k, kinc, kproj), (i, iinc, iproj)] {
                    for s in split(&sub)? {
                        out.push(Summand {
                            module: s.module,
                            inclusion: inc.compose(&s.inclusion),
                            projection: s.projection.compose(&proj),
                        });
                    }
                }
                return Ok(out);
            }
        }
    }
    Err(ModuleError::SplitFailure(format!(
        "no splitting endomorphism found (End has dimension {}, radical {})",
        ends.len(),
        rad.cols()
    )))
}

/// Isomorphism test for two indecomposable modules.
pub fn indecomposables_isomorphic(m: &Representation, n: &Representation) -> bool {
    if m.dims != n.dims {
        return false;
    }
    if m.same_data(n) {
        return true;
    }
    let Ok(fs) = hom_basis(m, n) else { return false };
    if fs.is_empty() {
        return false;
    }
    let gs = hom_basis(n, m).unwrap_or_default();
    for f in &fs {
        for g in &gs {
            if g.compose(f).is_iso() {
                return true;
            }
        }
    }
    // if m and n were isomorphic, id_m would be a combination of the g*f, so some g*f
    // would lie outside the radical of the local ring End(m)
    false
}

/// An explicit isomorphism between two indecomposable modules, if one exists.
///
/// For local `End(m)`, any basis of `Hom(m, n)` contains an element outside the radical,
/// and that element is invertible.
pub fn find_isomorphism(m: &Representation, n: &Representation) -> Option<ModuleMap> {
    if m.dims != n.dims {
        return None;
    }
    hom_basis(m, n).ok()?.into_iter().find(ModuleMap::is_iso)
}

pub fn decompose(m: &Representation) -> Result<Decomposition, ModuleError> {
    let summands = split(m)?;
    let mut classes: Vec<(Representation, usize)> = Vec::new();
    let mut class_of = Vec::new();
    for s in &summands {
        match classes
            .iter()
            .position(|(rep, _)| indecomposables_isomorphic(rep, &s.module))
        {
            Some(c) => {
                classes[c].1 += 1;
                class_of.push(c);
            }
            None => {
                classes.push((s.module.clone(), 1));
                class_of.push(classes.len() - 1);
            }
        }
    }
    Ok(Decomposition {
        classes,
        summands,
        class_of,
    })
}

pub fn is_indecomposable(m: &Representation) -> Result<bool, ModuleError> {
    if m.is_zero() {
        return Ok(false);
    }
    let ends: Vec<Matrix> = hom_basis(m, m)?.iter().map(ModuleMap::global).collect();
    Ok(ends.len() - radical_of_endomorphisms(&ends).cols() == 1)
}

pub fn is_isomorphic(m: &Representation, n: &Representation) -> Result<bool, ModuleError> {
    m.check_same(n)?;
    if m.dims != n.dims {
        return Ok(false);
    }
    if m.same_data(n) {
        return Ok(true);
    }
    let dm = decompose(m)?;
    let dn = decompose(n)?;
    if dm.summands.len() != dn.summands.len() {
        return Ok(false);
    }
    let mut used = vec![false; dn.classes.len()];
    for (rep, mult) in &dm.classes {
        let hit = dn
            .classes
            .iter()
            .enumerate()
            .find(|(i, (r, k))| !used[*i] && k == mult && indecomposables_isomorphic(rep, r));
        match hit {
            Some((i, _)) => used[i] = true,
            None => return Ok(false),
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiveralg::{build_algebra, Quiver, Relation};

    const Q: Field = Field::Rational;

    pub(crate) fn a4() -> Algebra {
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

    #[test]
    fn standard_modules_of_a4() {
        let a = a4();
        let p3 = projective(&a, 2).unwrap();
        assert_eq!(p3.dims(), &[1, 1, 1, 0]);
        let i1 = injective(&a, 0).unwrap();
        assert!(is_isomorphic(&p3, &i1).unwrap());
        let p4 = projective(&a, 3).unwrap();
        let i3 = injective(&a, 2).unwrap();
        assert!(is_isomorphic(&p4, &i3).unwrap());
        assert!(!is_isomorphic(&simple(&a, 0).unwrap(), &simple(&a, 1).unwrap()).unwrap());
        let (r, _) = radical(&p3);
        assert_eq!(r.dims(), &[1, 1, 0, 0]);
        for v in 0..4 {
            let (t, _) = top(&projective(&a, v).unwrap());
            assert!(is_isomorphic(&t, &simple(&a, v).unwrap()).unwrap());
            let (s, _) = socle(&injective(&a, v).unwrap());
            assert!(is_isomorphic(&s, &simple(&a, v).unwrap()).unwrap());
        }
    }

    #[test]
    fn hom_dimensions() {
        let a = a4();
        let s1 = simple(&a, 0).unwrap();
        assert_eq!(hom_dim(&s1, &s1), 1);
        assert_eq!(hom_dim(&s1, &simple(&a, 1).unwrap()), 0);
        assert_eq!(hom_dim(&projective(&a, 0).unwrap(), &projective(&a, 2).unwrap()), 1);
        let m = injective(&a, 1).unwrap();
        for v in 0..4 {
            assert_eq!(hom_dim(&projective(&a, v).unwrap(), &m), m.dim_at(v));
        }
    }

    #[test]
    fn kernels_and_cokernels() {
        let a = a4();
        let p3 = projective(&a, 2).unwrap();
        let (k, _) = kernel(&p3.identity());
        assert!(k.is_zero());
        let i2 = injective(&a, 1).unwrap();
        let (c, _) = cokernel(&ModuleMap::zero(&p3, &i2));
        assert_eq!(c.dims(), i2.dims());
        // the surjection P_3 -> I_2 has kernel P_1
        let f = hom_basis(&p3, &i2)
            .unwrap()
            .into_iter()
            .find(ModuleMap::is_epi)
            .unwrap();
        let (k, _) = kernel(&f);
        assert!(is_isomorphic(&k, &projective(&a, 0).unwrap()).unwrap());
    }

    #[test]
    fn decompositions() {
        let a = a4();
        let p1 = projective(&a, 0).unwrap();
        let d = decompose(&direct_sum_of(&a, &[p1.clone(), p1.clone()])).unwrap();
        assert_eq!(d.classes.len(), 1);
        assert_eq!(d.classes[0].1, 2);
        let s = direct_sum_of(&a, &[simple(&a, 0).unwrap(), simple(&a, 1).unwrap()]);
        assert_eq!(decompose(&s).unwrap().classes.len(), 2);
        let m = direct_sum_of(&a, &[injective(&a, 0).unwrap(), injective(&a, 3).unwrap(), projective(&a, 1).unwrap()]);
        let d = decompose(&m).unwrap();
        assert_eq!(d.summand_count(), 3);
        for s in &d.summands {
            assert!(s.projection.compose(&s.inclusion).is_iso());
        }
    }

    #[test]
    fn duality_matches_injectives() {
        let a = a4();
        let op = a.opposite();
        for v in 0..4 {
            let dp = projective(&op, v).unwrap().dual();
            assert!(is_isomorphic(&dp.rebase(&a), &injective(&a, v).unwrap()).unwrap());
        }
    }

    #[test]
    fn yoneda_maps_are_natural() {
        let a = a4();
        let m = injective(&a, 1).unwrap();
        let p = projective(&a, 2).unwrap();
        let v = vec![Q.one(); m.dim_at(2)];
        assert!(map_from_projective(&p, 2, &m, &v).is_natural());
        let i = injective(&a, 2).unwrap();
        let phi = vec![Q.one(); m.dim_at(2)];
        assert!(map_to_injective(&m, &i, 2, &phi).is_natural());
    }
}
