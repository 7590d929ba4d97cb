//! Text formats for algebras and modules.
//!
//! Algebra files:
//!
//! ```text
//! # comment
//! algebra A4
//! field Q            # or: field Fp 5
//! vertices 1 2 3 4
//! arrow alpha 2 3
//! rel alpha*beta     # zero relation
//! rel a*b - d*g      # commutativity; coefficients may be written 2, -1/2, +, -
//! ```
//!
//! Paths compose left to right: in `alpha*beta`, `alpha` is traversed first.
//!
//! Module files give one matrix per arrow `a: s -> t`, of shape `dim(s) x dim(t)`:
//!
//! ```text
//! module S1 over A4
//! dim 1 0 0 0
//! map delta []
//! ```
//!
//! Arrows without a `map` line act by zero.

use std::path::Path as FsPath;
use std::sync::Arc;

use thiserror::Error;

use crate::exactlin::{Field, LinAlgError, Matrix, Scalar};
use crate::quiveralg::{build_algebra, AlgebraError, BoundQuiverAlgebra, Quiver, Relation};
use crate::repmod::{Algebra, ModuleError, Representation};

pub const DEFAULT_MAX_PATH_LEN: usize = 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn read(path: &FsPath) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn lin(line: usize) -> impl Fn(LinAlgError) -> FormatError {
    move |e| syntax(line, e.to_string())
}

/// Parse an algebra; `field` overrides the field named in the file.
pub fn parse_algebra(text: &str, field: Option<Field>, max_path_len: usize) -> Result<BoundQuiverAlgebra, FormatError> {
    let mut name = None;
    let mut file_field = None;
    let mut quiver: Option<Quiver> = None;
    let mut rel_lines: Vec<(usize, Vec<String>)> = Vec::new();
    for (no, l) in lines(text) {
        let mut words = l.split_whitespace();
        let head = words.next().unwrap();
        let rest: Vec<String> = words.map(str::to_string).collect();
        match head {
            "algebra" => {
                if rest.len() != 1 {
                    return Err(syntax(no, "expected `algebra <name>`"));
                }
                name = Some(rest[0].clone());
            }
            "field" => file_field = Some(Field::parse(&rest.join(" ")).map_err(lin(no))?),
            "vertices" => {
                if quiver.is_some() {
                    return Err(syntax(no, "vertices given twice"));
                }
                quiver = Some(Quiver::new(rest).map_err(|e| syntax(no, e.to_string()))?);
            }
            "arrow" => {
                let q = quiver.as_mut().ok_or_else(|| syntax(no, "arrow before vertices"))?;
                if rest.len() != 3 {
                    return Err(syntax(no, "expected `arrow <name> <source> <target>`"));
                }
                q.add_arrow(&rest[0], &rest[1], &rest[2]).map_err(|e| syntax(no, e.to_string()))?;
            }
            "rel" => rel_lines.push((no, rest)),
            other => return Err(syntax(no, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| syntax(0, "missing `algebra` line"))?;
    let quiver = quiver.ok_or_else(|| syntax(0, "missing `vertices` line"))?;
    let field = field.or(file_field).unwrap_or(Field::Rational);
    let mut relations = Vec::new();
    for (no, words) in rel_lines {
        relations.push(parse_relation(no, &words, &quiver, field)?);
    }
    Ok(build_algebra(&name, field, quiver, relations, max_path_len)?)
}

fn parse_relation(no: usize, words: &[String], q: &Quiver, field: Field) -> Result<Relation, FormatError> {
    let mut terms = Vec::new();
    let mut coeff: Option<Scalar> = None;
    for w in words {
        let as_coeff = match w.as_str() {
            "+" => Some(field.one()),
            "-" => Some(-field.one()),
            _ if w.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+') => {
                Some(Scalar::parse(w, field).map_err(lin(no))?)
            }
            _ => None,
        };
        if let Some(c) = as_coeff {
            coeff = Some(match coeff {
                Some(prev) => &prev * &c,
                None => c,
            });
            continue;
        }
        let p = q.parse_path(w).map_err(|e| syntax(no, e.to_string()))?;
        terms.push((coeff.take().unwrap_or_else(|| field.one()), p));
    }
    if coeff.is_some() {
        return Err(syntax(no, "coefficient without a path"));
    }
    Relation::new(terms).map_err(|e| syntax(no, e.to_string()))
}

pub fn load_algebra(path: &FsPath, field: Option<Field>, max_path_len: usize) -> Result<Algebra, FormatError> {
    Ok(Arc::new(parse_algebra(&read(path)?, field, max_path_len)?))
}

/// Inverse of [`parse_algebra`].
pub fn write_algebra(a: &BoundQuiverAlgebra) -> String {
    let q = a.quiver();
    let mut out = format!("algebra {}\nfield {}\nvertices {}\n", a.name(), field_text(a.field()), q.vertices().join(" "));
    for arr in q.arrows() {
        out += &format!("arrow {} {} {}\n", arr.name, q.vertices()[arr.source], q.vertices()[arr.target]);
    }
    for r in a.relations() {
        let terms: Vec<String> = r.terms().iter().map(|(c, p)| format!("{c} {}", p.display(q))).collect();
        out += &format!("rel {}\n", terms.join(" "));
    }
    out
}

fn field_text(f: Field) -> String {
    match f {
        Field::Rational => "Q".into(),
        Field::Prime(p) => format!("Fp {p}"),
    }
}

/// Parse `[[a,b],[c,d]]` with the given shape; `[]` is the empty matrix.
fn parse_matrix(no: usize, text: &str, rows: usize, cols: usize, field: Field) -> Result<Matrix, FormatError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(no, "matrix must be enclosed in brackets"))?;
    let mut entries = Vec::new();
    let mut nrows = 0;
    if !inner.is_empty() {
        for row in inner.split("],") {
            let row = row.trim_start_matches('[').trim_end_matches(']');
            let vals: Vec<&str> = if row.is_empty() { Vec::new() } else { row.split(',').collect() };
            if vals.len() != cols {
                return Err(syntax(no, format!("row has {} entries, expected {cols}", vals.len())));
            }
            for v in vals {
                entries.push(Scalar::parse(v, field).map_err(lin(no))?);
            }
            nrows += 1;
        }
    }
    if nrows != rows && !(rows == 0 && nrows == 0) && !(cols == 0 && nrows == 0) {
        return Err(syntax(no, format!("matrix has {nrows} rows, expected {rows}")));
    }
    if entries.is_empty() {
        return Ok(Matrix::zeros(field, rows, cols));
    }
    Matrix::from_vec(field, rows, cols, entries).map_err(lin(no))
}

/// Parse a module over `a`; returns its name.
pub fn parse_module(text: &str, a: &Algebra) -> Result<(String, Representation), FormatError> {
    let q = a.quiver();
    let mut name = None;
    let mut dims: Option<Vec<usize>> = None;
    let mut maps: Vec<Option<Matrix>> = vec![None; q.arrow_count()];
    for (no, l) in lines(text) {
        let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match head {
            "module" => {
                let w: Vec<&str> = rest.split_whitespace().collect();
                if w.len() != 3 || w[1] != "over" {
                    return Err(syntax(no, "expected `module <name> over <algebra>`"));
                }
                if w[2] != a.name() {
                    return Err(syntax(no, format!("module is over `{}`, not `{}`", w[2], a.name())));
                }
                name = Some(w[0].to_string());
            }
            "dim" => {
                let d: Vec<usize> = rest
                    .split_whitespace()
                    .map(|x| x.parse().map_err(|_| syntax(no, format!("bad dimension `{x}`"))))
                    .collect::<Result<_, _>>()?;
                if d.len() != q.vertex_count() {
                    return Err(syntax(no, format!("{} dimensions for {} vertices", d.len(), q.vertex_count())));
                }
                dims = Some(d);
            }
            "map" => {
                let d = dims.as_ref().ok_or_else(|| syntax(no, "map before dim"))?;
                let (arrow, m) = rest.split_once(char::is_whitespace).ok_or_else(|| syntax(no, "expected `map <arrow> <matrix>`"))?;
                let ai = q.arrow(arrow).map_err(|e| syntax(no, e.to_string()))?;
                let arr = &q.arrows()[ai];
                maps[ai] = Some(parse_matrix(no, m, d[arr.source], d[arr.target], a.field())?);
            }
            other => return Err(syntax(no, format!("unknown keyword `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| syntax(0, "missing `module` line"))?;
    let dims = dims.ok_or_else(|| syntax(0, "missing `dim` line"))?;
    let maps = maps
        .into_iter()
        .zip(q.arrows())
        .map(|(m, arr)| m.unwrap_or_else(|| Matrix::zeros(a.field(), dims[arr.source], dims[arr.target])))
        .collect();
    Ok((name, Representation::new(a.clone(), dims, maps)?))
}

pub fn load_module(path: &FsPath, a: &Algebra) -> Result<(String, Representation), FormatError> {
    parse_module(&read(path)?, a)
}

/// Inverse of [`parse_module`].
pub fn write_module(name: &str, m: &Representation) -> String {
    let a = m.algebra();
    let dims: Vec<String> = m.dims().iter().map(usize::to_string).collect();
    let mut out = format!("module {name} over {}\ndim {}\n", a.name(), dims.join(" "));
    for (ai, arr) in a.quiver().arrows().iter().enumerate() {
        let mat = m.arrow_map(ai);
        let rows: Vec<String> = (0..mat.rows())
            .map(|r| format!("[{}]", mat.row(r).iter().map(Scalar::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        out += &format!("map {} [{}]\n", arr.name, rows.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::{is_isomorphic, projective};

    const A4: &str = "algebra A4\nfield Q\nvertices 1 2 3 4\narrow delta 1 2\narrow alpha 2 3\narrow beta 3 4\narrow gamma 4 2\nrel alpha*beta\nrel beta*gamma\nrel gamma*alpha\n";

    #[test]
    fn algebra_round_trip() {
        let a = parse_algebra(A4, None, DEFAULT_MAX_PATH_LEN).unwrap();
        assert_eq!(a.dim(), 9);
        let b = parse_algebra(&write_algebra(&a), None, DEFAULT_MAX_PATH_LEN).unwrap();
        assert_eq!(write_algebra(&a), write_algebra(&b));
        let c = parse_algebra(A4, Some(Field::Prime(3)), DEFAULT_MAX_PATH_LEN).unwrap();
        assert_eq!(c.field(), Field::Prime(3));
    }

    #[test]
    fn commutativity_relations() {
        let text = "algebra sq\nvertices 1 2 3 4\narrow a 1 2\narrow b 2 4\narrow c 1 3\narrow d 3 4\nrel a*b - c*d\n";
        let a = parse_algebra(text, None, 30).unwrap();
        assert_eq!(a.dim(), 4 + 4 + 1);
        let text = "algebra sq\nvertices 1 2 3 4\narrow a 1 2\narrow b 2 4\narrow c 1 3\narrow d 3 4\nrel 2 a*b -1/2 c*d\n";
        assert_eq!(parse_algebra(text, None, 30).unwrap().dim(), 9);
    }

    #[test]
    fn module_round_trip() {
        let a: Algebra = Arc::new(parse_algebra(A4, None, 30).unwrap());
        let p = projective(&a, 1).unwrap();
        let text = write_module("P2", &p);
        let (name, q) = parse_module(&text, &a).unwrap();
        assert_eq!(name, "P2");
        assert!(is_isomorphic(&p, &q).unwrap());
        assert_eq!(write_module("P2", &q), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "algebra x\nvertices 1 2\narrow a 1 3\n";
        match parse_algebra(bad, None, 30) {
            Err(FormatError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let a: Algebra = Arc::new(parse_algebra(A4, None, 30).unwrap());
        let bad = "module M over A4\ndim 1 1 0 0\nmap delta [[1,2]]\n";
        assert!(matches!(parse_module(bad, &a), Err(FormatError::Syntax { line: 3, .. })));
    }
}
