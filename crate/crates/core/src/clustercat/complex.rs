//! Bounded complexes of projective modules, chain maps and homotopy classes.
//!
//! A chain map out of a projective complex is stored by the images of the generators:
//! for every degree, the generator `i` of `X^k` (at vertex `v_i`) is sent to a vector of
//! `Y^k` at `v_i`. The flat concatenation of these vectors is the coordinate vector.

use crate::exactlin::{Field, Matrix, Scalar};
use crate::homalg::{nakayama_map, restrict_to_kernels, ElemMatrix, InjSum, ProjSum};
use crate::repmod::{cokernel, kernel, Algebra, ModuleMap, Representation};

/// Complex of finitely generated projectives, cohomological degrees `lo ..`.
#[derive(Clone, Debug)]
pub struct ProjComplex {
    pub lo: i64,
    pub terms: Vec<ProjSum>,
    /// `diffs[t]`: `terms[t] -> terms[t + 1]`.
    pub diffs: Vec<ElemMatrix>,
    algebra: Algebra,
}

/// Complex of arbitrary modules, used as the target of chain maps.
#[derive(Clone, Debug)]
pub struct ModComplex {
    pub lo: i64,
    pub terms: Vec<Representation>,
    pub diffs: Vec<ModuleMap>,
}

impl ModComplex {
    pub fn term(&self, k: i64) -> Option<&Representation> {
        let t = k - self.lo;
        if t < 0 || t as usize >= self.terms.len() || self.terms[t as usize].is_zero() {
            return None;
        }
        Some(&self.terms[t as usize])
    }

    /// Differential leaving degree `k`, if both ends are nonzero.
    pub fn diff(&self, k: i64) -> Option<&ModuleMap> {
        self.term(k)?;
        self.term(k + 1)?;
        Some(&self.diffs[(k - self.lo) as usize])
    }
}

fn zero_elem(a: &Algebra) -> Vec<Scalar> {
    vec![a.field().zero(); a.dim()]
}

impl ProjComplex {
    pub fn new(algebra: &Algebra, lo: i64, terms: Vec<ProjSum>, diffs: Vec<ElemMatrix>) -> ProjComplex {
        assert_eq!(diffs.len() + 1, terms.len().max(1));
        ProjComplex {
            lo,
            terms,
            diffs,
            algebra: algebra.clone(),
        }
    }

    pub fn zero(algebra: &Algebra) -> ProjComplex {
        ProjComplex {
            lo: 0,
            terms: Vec::new(),
            diffs: Vec::new(),
            algebra: algebra.clone(),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, k: i64) -> Option<&ProjSum> {
        let t = k - self.lo;
        if t < 0 || t as usize >= self.terms.len() || self.terms[t as usize].is_empty() {
            return None;
        }
        Some(&self.terms[t as usize])
    }

    pub fn diff(&self, k: i64) -> Option<&ElemMatrix> {
        self.term(k)?;
        self.term(k + 1)?;
        Some(&self.diffs[(k - self.lo) as usize])
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    /// `X[s]`: the same terms placed `s` degrees lower. Differentials keep their sign.
    pub fn shifted(&self, s: i64) -> ProjComplex {
        let mut c = self.clone();
        c.lo -= s;
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(ProjSum::is_empty)
    }

    pub fn modules(&self) -> ModComplex {
        ModComplex {
            lo: self.lo,
            terms: self.terms.iter().map(|t| t.module.clone()).collect(),
            diffs: self
                .diffs
                .iter()
                .enumerate()
                .map(|(t, e)| self.terms[t].map_to(&self.terms[t + 1], e))
                .collect(),
        }
    }

    /// Nakayama functor applied termwise, a complex of injectives.
    pub fn nakayama(&self) -> ModComplex {
        ModComplex {
            lo: self.lo,
            terms: self.terms.iter().map(|t| InjSum::new(&self.algebra, t.vertices.clone()).module).collect(),
            diffs: self
                .diffs
                .iter()
                .enumerate()
                .map(|(t, e)| nakayama_map(&self.terms[t], &self.terms[t + 1], e).2)
                .collect(),
        }
    }

    /// `d o d = 0` in every degree.
    pub fn is_complex(&self) -> bool {
        let m = self.modules();
        (0..self.diffs.len().saturating_sub(1)).all(|t| m.diffs[t + 1].compose(&m.diffs[t]).is_zero())
    }

    /// Cohomology modules `H^k`, nonzero ones only.
    pub fn cohomology(&self) -> Vec<(i64, Representation)> {
        let m = self.modules();
        let mut out = Vec::new();
        for (t, term) in m.terms.iter().enumerate() {
            let k = self.lo + t as i64;
            let (z, zinc) = match m.diffs.get(t) {
                Some(d) => kernel(d),
                None => (term.clone(), term.identity()),
            };
            let h = if t == 0 {
                z
            } else {
                let prev = &m.diffs[t - 1];
                let into = restrict_to_kernels(prev, &prev.source().identity(), &zinc).expect("d o d = 0");
                cokernel(&into).0
            };
            if !h.is_zero() {
                out.push((k, h));
            }
        }
        out
    }
}

/// Direct sum of complexes, summands concatenated in every degree.
pub fn direct_sum(a: &Algebra, parts: &[&ProjComplex]) -> ProjComplex {
    let live: Vec<&&ProjComplex> = parts.iter().filter(|p| !p.is_zero()).collect();
    if live.is_empty() {
        return ProjComplex::zero(a);
    }
    let lo = live.iter().map(|p| p.lo).min().unwrap();
    let hi = live.iter().map(|p| p.hi()).max().unwrap();
    let verts = |k: i64| -> Vec<Vec<usize>> {
        live.iter()
            .map(|p| p.term(k).map(|t| t.vertices.clone()).unwrap_or_default())
            .collect()
    };
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for k in lo..=hi {
        let vs = verts(k);
        terms.push(ProjSum::new(a, vs.concat()));
        if k == hi {
            break;
        }
        let ws = verts(k + 1);
        let ncols: usize = ws.iter().map(Vec::len).sum();
        let mut rows = Vec::new();
        for (pi, p) in live.iter().enumerate() {
            let col0: usize = ws[..pi].iter().map(Vec::len).sum();
            for i in 0..vs[pi].len() {
                let mut row = vec![zero_elem(a); ncols];
                if let Some(d) = p.diff(k) {
                    for (j, e) in d[i].iter().enumerate() {
                        row[col0 + j] = e.clone();
                    }
                }
                rows.push(row);
            }
        }
        diffs.push(rows);
    }
    ProjComplex::new(a, lo, terms, diffs)
}

/// Position of each generator's image inside a coordinate vector.
#[derive(Clone, Debug)]
pub struct Layout {
    lo: i64,
    /// Per degree of the source: `(offset, len)` for each generator.
    blocks: Vec<Vec<(usize, usize)>>,
    total: usize,
}

impl Layout {
    pub fn new(x: &ProjComplex, y: &ModComplex) -> Layout {
        let mut off = 0;
        let mut blocks = Vec::new();
        for k in x.degrees() {
            let mut b = Vec::new();
            if let Some(xt) = x.term(k) {
                for &v in &xt.vertices {
                    let len = y.term(k).map(|r| r.dim_at(v)).unwrap_or(0);
                    b.push((off, len));
                    off += len;
                }
            }
            blocks.push(b);
        }
        Layout { lo: x.lo, blocks, total: off }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    fn block(&self, k: i64) -> &[(usize, usize)] {
        let t = k - self.lo;
        if t < 0 || t as usize >= self.blocks.len() {
            return &[];
        }
        &self.blocks[t as usize]
    }

    /// First offset and total length of the degree-`k` block.
    fn span(&self, k: i64) -> (usize, usize) {
        let b = self.block(k);
        match (b.first(), b.last()) {
            (Some(f), Some(l)) => (f.0, l.0 + l.1 - f.0),
            _ => (0, 0),
        }
    }

    /// Overwrite the generator images in degree `k`.
    pub fn set_images(&self, coords: &mut [Scalar], k: i64, images: &[Vec<Scalar>]) {
        for (&(o, l), img) in self.block(k).iter().zip(images) {
            coords[o..o + l].clone_from_slice(&img[..l]);
        }
    }

    /// Generator images in degree `k`.
    pub fn images(&self, coords: &[Scalar], k: i64) -> Vec<Vec<Scalar>> {
        self.block(k).iter().map(|&(o, l)| coords[o..o + l].to_vec()).collect()
    }
}

/// Component in degree `k` of a chain map, as a module map.
pub fn component(x: &ProjComplex, y: &ModComplex, coords: &[Scalar], k: i64) -> Option<ModuleMap> {
    let xt = x.term(k)?;
    let yt = y.term(k)?;
    let lay = Layout::new(x, y);
    Some(xt.map_to_module(yt, &lay.images(coords, k)))
}

fn post_block(f: Field, xt: &ProjSum, phi: &ModuleMap) -> Matrix {
    let blocks: Vec<&Matrix> = xt.vertices.iter().map(|&v| phi.comp(v)).collect();
    Matrix::block_diag(f, &blocks)
}

/// Matrix sending generator images of `X^{k+1} -> Y` to those of `X^k -> Y` under
/// precomposition with the differential `d`.
fn pre_block(a: &Algebra, d: &ElemMatrix, xs: &ProjSum, xt: &ProjSum, y: &Representation) -> Matrix {
    let f = a.field();
    let rows: usize = xs.vertices.iter().map(|&v| y.dim_at(v)).sum();
    let cols: usize = xt.vertices.iter().map(|&w| y.dim_at(w)).sum();
    let mut m = Matrix::zeros(f, rows, cols);
    let mut r0 = 0;
    for (i, &v) in xs.vertices.iter().enumerate() {
        let mut c0 = 0;
        for (j, &w) in xt.vertices.iter().enumerate() {
            let mut block = Matrix::zeros(f, y.dim_at(v), y.dim_at(w));
            for p in a.paths_between(v, w) {
                let c = &d[i][j][p];
                if !c.is_zero() {
                    block = &block + &y.basis_action(p).scale(c);
                }
            }
            m.set_block(r0, c0, &block);
            c0 += y.dim_at(w);
        }
        r0 += y.dim_at(v);
    }
    m
}

/// `Hom_K(X, Y)`: chain maps modulo null-homotopic ones, `X` projective.
#[derive(Clone, Debug)]
pub struct HomK {
    pub layout: Layout,
    /// Chain maps whose classes form a basis.
    pub basis: Vec<Vec<Scalar>>,
    solver: Matrix,
    field: Field,
}

impl HomK {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the class of a chain map; `None` if it is not a chain map.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if self.layout.total == 0 {
            return Some(Vec::new());
        }
        let b = Matrix::from_columns(self.field, v.len(), &[v.to_vec()]);
        let x = self.solver.solve(&b).ok()??;
        Some(x.column(0)[..self.basis.len()].to_vec())
    }

    pub fn is_null(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some_and(|c| c.iter().all(Scalar::is_zero))
    }

    pub fn combination(&self, c: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.layout.total];
        for (b, x) in self.basis.iter().zip(c) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(b) {
                *o = &*o + &(x * y);
            }
        }
        out
    }
}

pub fn hom_k(x: &ProjComplex, y: &ModComplex) -> HomK {
    let a = x.algebra();
    let f = a.field();
    let lay = Layout::new(x, y);
    let n = lay.total;
    let mut cons = Matrix::zeros(f, 0, n);
    for k in x.degrees() {
        let (Some(xs), Some(y1)) = (x.term(k), y.term(k + 1)) else {
            continue;
        };
        let rows: usize = xs.vertices.iter().map(|&v| y1.dim_at(v)).sum();
        let mut m = Matrix::zeros(f, rows, n);
        if let Some(dy) = y.diff(k) {
            let (o, _) = lay.span(k);
            m.set_block(0, o, &post_block(f, xs, dy));
        }
        if let (Some(xt), Some(dx)) = (x.term(k + 1), x.diff(k)) {
            let (o, _) = lay.span(k + 1);
            m.set_block(0, o, &-&pre_block(a, dx, xs, xt, y1));
        }
        cons = cons.vstack(&m);
    }
    let cycles = cons.kernel_basis();
    // homotopies h^k: X^k -> Y^{k-1}
    let mut hom_cols: Vec<Matrix> = Vec::new();
    for k in x.degrees() {
        let (Some(xs), Some(ym)) = (x.term(k), y.term(k - 1)) else {
            continue;
        };
        let hn: usize = xs.vertices.iter().map(|&v| ym.dim_at(v)).sum();
        let mut m = Matrix::zeros(f, n, hn);
        if let Some(dy) = y.diff(k - 1) {
            let (o, _) = lay.span(k);
            m.set_block(o, 0, &post_block(f, xs, dy));
        }
        if let (Some(xp), Some(dx)) = (x.term(k - 1), x.diff(k - 1)) {
            let (o, _) = lay.span(k - 1);
            m.set_block(o, 0, &pre_block(a, dx, xp, xs, ym));
        }
        hom_cols.push(m);
    }
    let mut bd = Matrix::zeros(f, n, 0);
    for m in &hom_cols {
        bd = bd.hstack(m);
    }
    let bd = if bd.cols() > 0 { bd.column_space() } else { bd };
    let mut chosen = Matrix::zeros(f, n, 0);
    let mut rank = bd.cols();
    let mut basis = Vec::new();
    for c in cycles.columns() {
        let trial = chosen.hstack(&Matrix::from_columns(f, n, &[c.clone()]));
        let r = trial.hstack(&bd).rank();
        if r > rank {
            rank = r;
            chosen = trial;
            basis.push(c);
        }
    }
    HomK {
        layout: lay,
        basis,
        solver: chosen.hstack(&bd),
        field: f,
    }
}

/// `g o f` for `f: X -> Y` and `g: Y -> Z`, with `Y` projective.
pub fn compose(x: &ProjComplex, y: &ProjComplex, z: &ModComplex, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
    let ym = y.modules();
    let gl = Layout::new(y, z);
    let maps = |k: i64| -> Option<ModuleMap> {
        let yt = y.term(k)?;
        let zt = z.term(k)?;
        Some(yt.map_to_module(zt, &gl.images(g, k)))
    };
    post_maps(x, &ym, z, f, &maps)
}

/// `phi o f` for a chain map `f: X -> Y` and a degreewise module map `phi: Y -> Z`.
pub fn post_maps(x: &ProjComplex, y: &ModComplex, z: &ModComplex, f: &[Scalar], phi: &dyn Fn(i64) -> Option<ModuleMap>) -> Vec<Scalar> {
    let fl = Layout::new(x, y);
    let zl = Layout::new(x, z);
    let field = x.algebra().field();
    let mut out = vec![field.zero(); zl.total];
    for k in x.degrees() {
        let Some(xt) = x.term(k) else { continue };
        if z.term(k).is_none() || y.term(k).is_none() {
            continue;
        }
        let Some(p) = phi(k) else { continue };
        let imgs = fl.images(f, k);
        for (i, (&v, &(o, _))) in xt.vertices.iter().zip(zl.block(k)).enumerate() {
            for (r, s) in p.comp(v).mul_vec(&imgs[i]).into_iter().enumerate() {
                out[o + r] = s;
            }
        }
    }
    out
}

/// Identity chain map of `X`.
pub fn identity(x: &ProjComplex) -> Vec<Scalar> {
    let lay = Layout::new(x, &x.modules());
    let mut out = vec![x.algebra().field().zero(); lay.total];
    for k in x.degrees() {
        let Some(xt) = x.term(k) else { continue };
        for (i, &(o, l)) in lay.block(k).iter().enumerate() {
            out[o..o + l].clone_from_slice(&xt.generator(i));
        }
    }
    out
}

/// Sum of chain maps `f_b: B_b -> Z` as one map out of the direct sum of the `B_b`.
pub fn sum_map(a: &Algebra, parts: &[&ProjComplex], z: &ModComplex, maps: &[Vec<Scalar>]) -> (ProjComplex, Vec<Scalar>) {
    let sum = direct_sum(a, parts);
    let lay = Layout::new(&sum, z);
    let mut out = Vec::with_capacity(lay.total);
    for k in sum.degrees() {
        for (p, f) in parts.iter().zip(maps) {
            if p.is_zero() {
                continue;
            }
            for img in Layout::new(p, z).images(f, k) {
                out.extend(img);
            }
        }
    }
    assert_eq!(out.len(), lay.total);
    (sum, out)
}

/// Nakayama functor on a chain map of projective complexes, degreewise.
pub fn nakayama_chain(x: &ProjComplex, y: &ProjComplex, f: &[Scalar]) -> impl Fn(i64) -> Option<ModuleMap> {
    let lay = Layout::new(x, &y.modules());
    let mut maps = std::collections::HashMap::new();
    for k in x.degrees() {
        let (Some(xt), Some(yt)) = (x.term(k), y.term(k)) else { continue };
        let elems = xt.elements_from_images(&lay.images(f, k), yt);
        maps.insert(k, nakayama_map(xt, yt, &elems).2);
    }
    move |k| maps.get(&k).cloned()
}

/// Cocone `W` of `phi: B -> Z` with its projection `W -> B`.
///
/// `W^k = B^k + Z^{k-1}` and `d(b, z) = (d b, phi b - d z)`, so `W -> B -> Z` extends to a
/// triangle.
pub fn cocone(b: &ProjComplex, z: &ProjComplex, phi: &[Scalar]) -> (ProjComplex, Vec<Scalar>) {
    let a = b.algebra().clone();
    let zm = z.modules();
    let play = Layout::new(b, &zm);
    let (lo, hi) = match (b.is_zero(), z.is_zero()) {
        (true, true) => return (ProjComplex::zero(&a), Vec::new()),
        (false, true) => (b.lo, b.hi()),
        (true, false) => (z.lo + 1, z.hi() + 1),
        (false, false) => (b.lo.min(z.lo + 1), b.hi().max(z.hi() + 1)),
    };
    let bv = |k: i64| b.term(k).map(|t| t.vertices.clone()).unwrap_or_default();
    let zv = |k: i64| z.term(k).map(|t| t.vertices.clone()).unwrap_or_default();
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for k in lo..=hi {
        terms.push(ProjSum::new(&a, [bv(k), zv(k - 1)].concat()));
        if k == hi {
            break;
        }
        let nb1 = bv(k + 1).len();
        let ncols = nb1 + zv(k).len();
        let mut rows = Vec::new();
        let phik = match (b.term(k), z.term(k)) {
            (Some(bt), Some(zt)) => Some(bt.elements_from_images(&play.images(phi, k), zt)),
            _ => None,
        };
        for i in 0..bv(k).len() {
            let mut row = vec![zero_elem(&a); ncols];
            if let Some(d) = b.diff(k) {
                for (j, e) in d[i].iter().enumerate() {
                    row[j] = e.clone();
                }
            }
            if let Some(p) = &phik {
                for (j, e) in p[i].iter().enumerate() {
                    row[nb1 + j] = e.clone();
                }
            }
            rows.push(row);
        }
        for i in 0..zv(k - 1).len() {
            let mut row = vec![zero_elem(&a); ncols];
            if let Some(d) = z.diff(k - 1) {
                for (j, e) in d[i].iter().enumerate() {
                    row[nb1 + j] = e.iter().map(|s| -s).collect();
                }
            }
            rows.push(row);
        }
        diffs.push(rows);
    }
    let w = ProjComplex::new(&a, lo, terms, diffs);
    let bm = b.modules();
    let lay = Layout::new(&w, &bm);
    let mut proj = vec![a.field().zero(); lay.total];
    for k in w.degrees() {
        let Some(bt) = b.term(k) else { continue };
        for (i, &(o, l)) in lay.block(k).iter().enumerate().take(bt.len()) {
            proj[o..o + l].clone_from_slice(&bt.generator(i));
        }
    }
    (w, proj)
}
