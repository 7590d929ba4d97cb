//! The `tiltlab` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::clustercat::{ClusterCategory, ClusterError, DynkinType, Ind};
use crate::exactlin::Field;
use crate::format::{load_algebra, load_module, write_algebra, FormatError};
use crate::homalg::{ext_dim, global_dim, gorenstein_report, min_resolution, ResolutionKind};
use crate::repmod::{injective, projective, simple, Algebra, Representation};
use crate::report::{computed, elementary, published, Check, Comparison, Report};
use crate::stablecm::{
    cm_cy_report, cy3_report, cy_selfinjective_report, is_selfinjective, nakayama_permutation, preprojective_algebra,
    relative_cy_report, StableError,
};
use crate::suite::{self, SuiteConfig, SuiteError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tiltlab", version, about = "Homological checks for bound quiver algebras and cluster categories")]
pub struct Cli {
    /// Bound for projective and injective dimensions; larger values are reported as AtLeast(N).
    #[arg(long, global = true, default_value_t = 20)]
    pub cutoff: usize,
    /// Longest path considered when reducing the path algebra.
    #[arg(long, global = true, default_value_t = 30)]
    pub max_path_len: usize,
    /// Also write the machine-readable report to this file.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Override the field: `Q` or `Fp <p>`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse an algebra (and optionally modules) and verify its multiplication.
    Check {
        algebra: PathBuf,
        #[arg(long = "module")]
        modules: Vec<PathBuf>,
    },
    /// Minimal projective or injective resolution of a module.
    Resolve {
        algebra: PathBuf,
        /// Module file, or a standard module such as `P_2`, `I3`, `S_1`.
        module: String,
        #[arg(long)]
        injective: bool,
        #[arg(long, default_value_t = 10)]
        length: usize,
    },
    /// `dim Ext^n(M, N)` for n up to `--degree`.
    Ext {
        algebra: PathBuf,
        m: String,
        n: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Injective dimensions of projectives and projective dimensions of injectives.
    Gorenstein {
        algebra: PathBuf,
        /// Fail unless the Gorenstein dimension is at most this.
        #[arg(long)]
        at_most: Option<usize>,
    },
    /// Duality between Ext^2 and stable Ext^1 on simples, for Gorenstein dimension at most 1.
    Cy3 { algebra: PathBuf },
    /// Calabi-Yau symmetry of the stable (Cohen-Macaulay) category on simples.
    Stablecm {
        algebra: PathBuf,
        #[arg(long, default_value_t = 3)]
        cy: usize,
    },
    /// Preprojective algebra of type A_n, written in the algebra format.
    Preproj {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Relative 3-CY duality for the endomorphism algebra of a maximal rigid module.
    Relcy {
        #[arg(long)]
        rank: usize,
    },
    /// Cluster categories of Dynkin type.
    Cluster(ClusterArgs),
    /// Run the acceptance battery.
    Suite {
        /// Only these criteria (repeatable).
        #[arg(long = "criterion")]
        criteria: Vec<usize>,
        /// Skip the preprojective A_3 case.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args, Debug)]
pub struct ClusterArgs {
    /// Dynkin type letter: A, D or E.
    #[arg(long = "type")]
    pub kind: String,
    #[arg(long)]
    pub rank: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[command(subcommand)]
    pub verb: ClusterVerb,
}

#[derive(Subcommand, Debug)]
pub enum ClusterVerb {
    /// All cluster-tilting sets in the fundamental domain.
    Enumerate {
        #[arg(long)]
        expect: Option<usize>,
    },
    /// Exchange one object of a cluster-tilting set (d = 2).
    Mutate {
        /// Comma-separated domain indices; defaults to the projectives.
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        position: usize,
    },
    /// Quiver with relations of the endomorphism algebra.
    Endo {
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the endomorphism algebras of a set and its mutation at one position.
    Neighbors {
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        position: usize,
    },
    /// Resolve domain objects by the set through iterated approximations.
    #[command(name = "resolve-in-C")]
    ResolveInC {
        #[arg(long)]
        set: Option<String>,
        /// Domain index; defaults to every object.
        #[arg(long)]
        object: Option<usize>,
    },
    /// Project a tilting complex to the cluster category; defaults to the projectives.
    FromTilting {
        /// Comma-separated `module:shift` pairs, modules indexed in the AR quiver.
        #[arg(long)]
        summands: Option<String>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    /// A precondition of the requested computation does not hold for the input.
    Precondition(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Precondition(_) => EXIT_CHECK_FAILED,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Precondition(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<StableError> for CliError {
    fn from(e: StableError) -> Self {
        match e {
            StableError::NotGorensteinDim1(_)
            | StableError::NotGorenstein
            | StableError::NotSelfinjective(_)
            | StableError::NotRigid(_) => CliError::Precondition(e.to_string()),
            StableError::InvalidInput(m) => CliError::Parse(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ClusterError> for CliError {
    fn from(e: ClusterError) -> Self {
        match &e {
            ClusterError::InvalidInput(_) | ClusterError::Unsupported(_) => CliError::Parse(e.to_string()),
            ClusterError::NotTilting(..) | ClusterError::NotClusterTilting | ClusterError::HomologyDegreeOutOfRange(_) => {
                CliError::Precondition(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<SuiteError> for CliError {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Format(f) => f.into(),
            SuiteError::UnknownCriterion(n) => CliError::Parse(format!("no criterion {n}")),
            other => CliError::Internal(other.to_string()),
        }
    }
}

struct Ctx {
    field: Option<Field>,
    cutoff: usize,
    max_path_len: usize,
}

impl Ctx {
    fn algebra(&self, path: &Path) -> Result<Algebra, CliError> {
        Ok(load_algebra(path, self.field, self.max_path_len)?)
    }
}

/// A standard module name (`P_2`, `I3`, `S_1`) or a module file.
fn module_arg(a: &Algebra, spec: &str) -> Result<(String, Representation), CliError> {
    let mut chars = spec.chars();
    if let Some(kind @ ('P' | 'I' | 'S')) = chars.next() {
        let label = chars.as_str().trim_start_matches('_');
        if let Some(v) = a.quiver().vertices().iter().position(|l| l == label) {
            let m = match kind {
                'P' => projective(a, v),
                'I' => injective(a, v),
                _ => simple(a, v),
            }
            .map_err(|e| CliError::Internal(e.to_string()))?;
            return Ok((format!("{kind}_{label}"), m));
        }
    }
    Ok(load_module(Path::new(spec), a)?)
}

fn parse_set(c: &ClusterCategory, set: &Option<String>) -> Result<Vec<usize>, CliError> {
    let Some(text) = set else {
        return Ok(c.projective_seed());
    };
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part
            .parse()
            .map_err(|_| CliError::Parse(format!("bad domain index `{part}`")))?;
        if i >= c.domain().len() {
            return Err(CliError::Parse(format!("domain index {i} out of range 0..{}", c.domain().len())));
        }
        out.push(i);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn names(c: &ClusterCategory, set: &[usize]) -> Vec<String> {
    set.iter().map(|&i| c.name(i)).collect()
}

/// Parse arguments, run the command and return the exit code, the report and human output.
pub fn run<I, T>(args: I) -> (i32, String, Option<Report>)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let mut echo = argv.clone();
    if let Some(first) = echo.first_mut() {
        *first = "tiltlab".into();
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_PASS };
            return (code, e.to_string(), None);
        }
    };
    let field = match cli.field.as_deref().map(Field::parse).transpose() {
        Ok(f) => f,
        Err(e) => return (EXIT_PARSE, format!("error: {e}\n"), None),
    };
    let ctx = Ctx {
        field,
        cutoff: cli.cutoff,
        max_path_len: cli.max_path_len,
    };
    let reads_files = matches!(
        cli.command,
        Command::Check { .. } | Command::Resolve { .. } | Command::Ext { .. } | Command::Gorenstein { .. } | Command::Cy3 { .. } | Command::Stablecm { .. }
    );
    let env_field = match field {
        Some(f) => f.to_string(),
        None if reads_files => "as declared by the input".into(),
        None => Field::Rational.to_string(),
    };
    let mut report = Report::new(echo, crate::report::Environment::new(&env_field, cli.cutoff, cli.max_path_len));
    let mut out = String::new();
    if let Err(e) = dispatch(&cli.command, &ctx, &mut report, &mut out) {
        return (e.exit_code(), format!("{out}error: {}\n", e.message()), None);
    }
    out.push_str(&report.human());
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            return (EXIT_INTERNAL, format!("{out}error: cannot write {}: {e}\n", path.display()), Some(report));
        }
    }
    let code = if report.passed() { EXIT_PASS } else { EXIT_CHECK_FAILED };
    (code, out, Some(report))
}

fn dispatch(cmd: &Command, ctx: &Ctx, r: &mut Report, out: &mut String) -> Result<(), CliError> {
    match cmd {
        Command::Check { algebra, modules } => {
            let a = ctx.algebra(algebra)?;
            r.note("dimension", a.dim());
            r.note("vertices", a.quiver().vertices());
            r.note("cartan_matrix", a.cartan_matrix());
            r.note("radical_nilpotency", a.nilpotency_index());
            r.push(Check::equal("associativity", a.check_associativity(), true, elementary("path multiplication is associative")));
            for m in modules {
                let (name, rep) = load_module(m, &a)?;
                r.note(&format!("module.{name}.dims"), rep.dims());
            }
        }
        Command::Resolve { algebra, module, injective, length } => {
            let a = ctx.algebra(algebra)?;
            let (name, m) = module_arg(&a, module)?;
            let kind = if *injective { ResolutionKind::Injective } else { ResolutionKind::Projective };
            let res = min_resolution(&m, kind, *length);
            out.push_str(&format!("{}\n", res.display(&name)));
            r.note("resolution", res.display(&name));
            r.note("length", res.length());
            let cert = res.verify();
            r.push(Check::equal("certificate.compositions_vanish", cert.compositions_vanish, true, elementary("d o d = 0")));
            r.push(Check::equal("certificate.exact", cert.exact, true, elementary("homology vanishes")));
            r.push(Check::equal("certificate.minimal", cert.minimal, true, elementary("differentials land in the radical")));
        }
        Command::Ext { algebra, m, n, degree } => {
            let a = ctx.algebra(algebra)?;
            let (mn, mm) = module_arg(&a, m)?;
            let (nn, nm) = module_arg(&a, n)?;
            for k in 0..=*degree {
                r.note(&format!("dim Ext^{k}({mn}, {nn})"), ext_dim(&mm, &nm, k));
            }
        }
        Command::Gorenstein { algebra, at_most } => {
            let a = ctx.algebra(algebra)?;
            let g = gorenstein_report(&a, ctx.cutoff);
            out.push_str(&format!("Gorenstein dimension {}\n", g.dimension));
            r.note("inj_dim_projectives", g.inj_dim_projectives.iter().map(|d| d.to_string()).collect::<Vec<_>>());
            r.note("proj_dim_injectives", g.proj_dim_injectives.iter().map(|d| d.to_string()).collect::<Vec<_>>());
            r.note("gorenstein_dimension", g.dimension.to_string());
            r.note("global_dimension", global_dim(&a, ctx.cutoff).to_string());
            if let Some(b) = at_most {
                r.push(Check::new(
                    "gorenstein_dimension",
                    g.dimension.finite().map_or(i64::MAX, |d| d as i64),
                    Comparison::AtMost,
                    *b as i64,
                    elementary("requested bound"),
                ));
            }
        }
        Command::Cy3 { algebra } => {
            let a = ctx.algebra(algebra)?;
            let rep = cy3_report(&a, ctx.cutoff)?;
            for d in &rep.duality {
                r.push(Check::equal(
                    format!("duality.{}.{}", d.x, d.y),
                    d.lhs,
                    d.rhs,
                    published("Ext^2(Y, X) dual to stable Ext^1(X, Y)"),
                ));
            }
            r.note("gorenstein_dimension", rep.gorenstein_dimension.to_string());
            r.note("naive_exempt_pairs", rep.exempt_pairs());
            r.note("naive_holds_off_exemptions", rep.naive_holds_off_exemptions());
        }
        Command::Stablecm { algebra, cy } => {
            let a = ctx.algebra(algebra)?;
            if *cy == 0 {
                return Err(CliError::Parse("--cy must be positive".into()));
            }
            let entries = if is_selfinjective(&a) {
                r.note("nakayama_permutation", nakayama_permutation(&a).unwrap_or_default());
                cy_selfinjective_report(&a, cy - 1)?.entries
            } else {
                let rep = cm_cy_report(&a, *cy, ctx.cutoff)?;
                r.push(Check::equal("stabilized", rep.stabilized, true, elementary("colimit constant from the Gorenstein dimension on")));
                rep.entries
            };
            r.note("selfinjective", is_selfinjective(&a));
            for e in entries {
                r.push(Check::equal(
                    format!("cy{cy}.{}.{}.{}", e.x, e.y, e.n),
                    e.lhs,
                    e.rhs,
                    computed("stable Hom computed on both sides"),
                ));
            }
        }
        Command::Preproj { rank, output } => {
            let field = ctx.field.unwrap_or(Field::Rational);
            let l = preprojective_algebra(*rank, field)?;
            let text = write_algebra(&l);
            match output {
                Some(p) => std::fs::write(p, &text).map_err(|e| CliError::Internal(e.to_string()))?,
                None => out.push_str(&text),
            }
            r.note("dimension", l.dim());
            r.push(Check::equal("selfinjective", is_selfinjective(&l), true, published("preprojective algebras of Dynkin type are selfinjective")));
        }
        Command::Relcy { rank } => {
            let field = ctx.field.unwrap_or(Field::Rational);
            let l = preprojective_algebra(*rank, field)?;
            let rep = relative_cy_report(&l, None, ctx.cutoff)?;
            r.note("complement", &rep.complement);
            r.note("transcript", &rep.transcript);
            r.note("endo_dimension", rep.endo_dimension);
            r.push(Check::new(
                "global_dimension",
                rep.global_dimension.finite().map_or(i64::MAX, |d| d as i64),
                Comparison::AtMost,
                3,
                published("abelian of global dimension at most 3"),
            ));
            for e in rep.entries {
                r.push(Check::equal(
                    format!("duality.{}.{}.{}", e.i, e.x, e.y),
                    e.lhs,
                    e.rhs,
                    published("Ext^i(X, Y) dual to Ext^(3-i)(Y, X)"),
                ));
            }
        }
        Command::Cluster(args) => cluster(args, ctx, r, out)?,
        Command::Suite { criteria, quick } => {
            let cfg = SuiteConfig {
                field: ctx.field.unwrap_or(Field::Rational),
                cutoff: ctx.cutoff,
                max_path_len: ctx.max_path_len,
                preprojective_a3: !quick,
                ..SuiteConfig::default()
            };
            let list: Vec<usize> = if criteria.is_empty() { (1..=suite::CRITERIA.len()).collect() } else { criteria.clone() };
            for n in list {
                let o = suite::run(n, &cfg)?;
                out.push_str(&format!(
                    "criterion {n:>2} [{}] {}\n",
                    if o.passed() { "PASS" } else { "FAIL" },
                    o.title
                ));
                r.extend(o.checks);
                for (k, v) in o.notes {
                    r.notes.insert(k, v);
                }
            }
        }
    }
    Ok(())
}

fn cluster(args: &ClusterArgs, ctx: &Ctx, r: &mut Report, out: &mut String) -> Result<(), CliError> {
    let t: DynkinType = format!("{}{}", args.kind, args.rank)
        .parse()
        .map_err(|e: ClusterError| CliError::Parse(e.to_string()))?;
    let c = ClusterCategory::dynkin(t, args.d, ctx.field.unwrap_or(Field::Rational))?;
    r.note("domain", (0..c.domain().len()).map(|i| c.name(i)).collect::<Vec<_>>());
    match &args.verb {
        ClusterVerb::Enumerate { expect } => {
            let all = c.enumerate_cluster_tilting()?;
            for s in &all {
                out.push_str(&format!("{s:?} {}\n", names(&c, s).join(" + ")));
            }
            out.push_str(&format!("{} sets\n", all.len()));
            r.note("sets", &all);
            r.note("count", all.len());
            if let Some(n) = expect {
                r.push(Check::equal("count", all.len(), n, computed("requested count")));
            }
            if c.d() == 2 {
                let closure: Vec<Vec<usize>> = c.mutation_closure(&c.projective_seed())?.into_iter().collect();
                r.push(Check::equal("mutation_closure_equals_enumeration", closure, &all, computed("exhaustive search")));
            }
        }
        ClusterVerb::Mutate { set, position } => {
            let s = parse_set(&c, set)?;
            let m = c.mutate(&s, *position)?;
            out.push_str(&format!("{} -> {}\n", names(&c, &s).join(" + "), names(&c, &m.set).join(" + ")));
            r.note("mutation", &m);
            let back = m.set.iter().position(|&x| x == m.added).unwrap();
            let again = c.mutate(&m.set, back)?;
            r.push(Check::equal("involutive", again.set, &s, elementary("exchange pairs are symmetric")));
            r.push(Check::equal("result_cluster_tilting", c.is_cluster_tilting(&m.set)?.holds, true, elementary("mutation preserves cluster tilting")));
        }
        ClusterVerb::Endo { set, output } => {
            let s = parse_set(&c, set)?;
            let cert = c.is_cluster_tilting(&s)?;
            r.push(Check::equal("cluster_tilting", cert.holds, true, elementary("input is a cluster-tilting set")));
            let p = c.endo_algebra(&s)?;
            let text = write_algebra(&p.algebra);
            match output {
                Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Internal(e.to_string()))?,
                None => out.push_str(&text),
            }
            r.note("arrows", &p.arrows);
            r.note("relations", &p.relations);
            r.note("dimension", p.algebra.dim());
            if c.d() == 2 {
                let g = gorenstein_report(&Arc::new(p.algebra), ctx.cutoff).dimension;
                r.push(Check::new(
                    "gorenstein_dimension",
                    g.finite().map_or(i64::MAX, |d| d as i64),
                    Comparison::AtMost,
                    1,
                    published("Gorenstein of dimension at most 1"),
                ));
            }
        }
        ClusterVerb::Neighbors { set, position } => {
            let s = parse_set(&c, set)?;
            let n = c.neighbor_check(&s, *position)?;
            r.note("neighbors", &n);
            r.push(Check::equal("necessary_conditions", n.holds, true, published("neighbouring cluster-tilted algebras")));
        }
        ClusterVerb::ResolveInC { set, object } => {
            let s = parse_set(&c, set)?;
            let objects: Vec<usize> = match object {
                Some(y) if *y < c.domain().len() => vec![*y],
                Some(y) => return Err(CliError::Parse(format!("domain index {y} out of range"))),
                None => (0..c.domain().len()).collect(),
            };
            for y in objects {
                let res = c.triangular_resolution(&s, y)?;
                let name = c.name(y);
                out.push_str(&format!("{name}: terms {:?}\n", res.terms));
                r.push(Check::equal(format!("{name}.last_term_in_set"), res.last_in_set, true, published("T_(d-1) lies in T")));
                let (l, rr): (Vec<usize>, Vec<usize>) = res.covariant_degree0.iter().copied().unzip();
                r.push(Check::equal(format!("{name}.degree0_homology"), l, rr, computed("dim Hom_C(T, Y)")));
                let (l, rr): (Vec<usize>, Vec<usize>) = res.contravariant_top.iter().copied().unzip();
                r.push(Check::equal(format!("{name}.top_homology"), l, rr, computed("dim Hom_C(Y[1-d], T)")));
            }
        }
        ClusterVerb::FromTilting { summands } => {
            let m = c.model();
            let tilt: Vec<Ind> = match summands {
                None => (0..m.algebra().vertex_count()).map(|v| Ind::new(m.projective(v), 0)).collect(),
                Some(text) => text
                    .split(',')
                    .map(|p| {
                        let (a, b) = p.trim().split_once(':').ok_or_else(|| CliError::Parse(format!("expected module:shift, got `{p}`")))?;
                        let module: usize = a.parse().map_err(|_| CliError::Parse(format!("bad module index `{a}`")))?;
                        let shift: i64 = b.parse().map_err(|_| CliError::Parse(format!("bad shift `{b}`")))?;
                        if module >= m.module_count() {
                            return Err(CliError::Parse(format!("module index {module} out of range")));
                        }
                        Ok(Ind::new(module, shift))
                    })
                    .collect::<Result<_, _>>()?,
            };
            let rep = c.tilting_to_dcluster(&tilt)?;
            r.note("projected", names(&c, &rep.projected));
            r.note("endo_dimension", rep.endo_dimension);
            r.push(Check::equal("cluster_tilting", rep.certificate.holds, true, published("pi(T) is d-cluster tilting")));
            let hc: Vec<usize> = rep.entries.iter().map(|e| e.2).collect();
            let formula: Vec<usize> = rep.entries.iter().map(|e| e.3 + e.4).collect();
            r.push(Check::equal("hom_formula", hc, formula, computed("Hom_D plus Ext^d over End_D(T)")));
        }
    }
    Ok(())
}
