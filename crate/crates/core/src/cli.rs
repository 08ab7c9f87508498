//! The `herglotz` command line: seeded generation, sampling, extraction,
//! retrieval and verification over text files.
//!
//! Exit status: 0 success, 1 usage or parse error, 2 inconsistent data,
//! 3 branch not applicable.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extract::{extract_magnitude_data, sampling_grid, UnmixMethod};
use crate::field::io::{
    parse_field, parse_grid, parse_magnitude_data, read_field, write_atomic, write_field, write_grid,
    write_magnitude_data, FIELD_FORMAT, MAGNITUDE_FORMAT,
};
use crate::field::{
    compare_magnitudes, magnitude_coeffs, sample_magnitude_grid, trivially_equivalent, FieldGenerator, HerglotzField,
    MagnitudeData,
};
use crate::harmonics::{Basis, BasisKind, BasisSpec, Normalization};
use crate::retrieve::{canonicalize, retrieve, Branch, RetrievalResult, RetrieveOptions, ACCEPT};
use crate::specfun::{bessel_j, bessel_product_coefficients, gegenbauer, BesselOrder, SeriesBudget};

#[derive(Debug, Parser)]
#[command(name = "herglotz", version, about = "Herglotz wave fields and phase retrieval from |u|")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded random field.
    Gen(GenArgs),
    /// Sample |u|² of a field on a polar/spherical grid.
    Sample(SampleArgs),
    /// Recover magnitude data Re c_{m,n} from a grid (or exactly from a field).
    Extract(ExtractArgs),
    /// Reconstruct a field from magnitude data, a grid or a field.
    Retrieve(RetrieveArgs),
    /// Compare two fields: equal magnitude, trivial equivalence, degree powers.
    Verify(VerifyArgs),
    /// Rewrite a field in canonical gauge.
    Canon(CanonArgs),
    /// Evaluate special functions.
    Specfun(SpecfunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisArg {
    Fourier2d,
    Zonal,
    Palpha,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormArg {
    Raw,
    Orthonormal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BranchArg {
    Auto,
    Mean,
    Real,
    Sparse,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    #[value(name = "least-squares", alias = "ls")]
    LeastSquares,
    Taylor,
}

impl From<NormArg> for Normalization {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::Raw => Normalization::Raw,
            NormArg::Orthonormal => Normalization::Orthonormal,
        }
    }
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Auto => Branch::Auto,
            BranchArg::Mean => Branch::Mean,
            BranchArg::Real => Branch::Real,
            BranchArg::Sparse => Branch::Sparse,
        }
    }
}

impl From<MethodArg> for UnmixMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::LeastSquares => UnmixMethod::LeastSquares,
            MethodArg::Taylor => UnmixMethod::Taylor,
        }
    }
}

/// Basis selection shared by `gen` and `retrieve`.
#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Defaults to fourier2d for d = 2 and palpha otherwise.
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
    #[arg(long, value_enum, default_value_t = NormArg::Orthonormal)]
    pub normalization: NormArg,
    /// Seeds the field coefficients and, for zonal bases, the pole table.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    #[arg(long)]
    pub max_degree: usize,
    #[arg(long)]
    pub real: bool,
    #[arg(long)]
    pub sparse: bool,
    #[arg(long)]
    pub zonal: bool,
    #[arg(long)]
    pub zero_mean: bool,
    #[arg(long)]
    pub all_r: bool,
    #[arg(long)]
    pub single_mode: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    pub field: PathBuf,
    #[arg(long)]
    pub radial_nodes: Option<usize>,
    /// d = 2: points on the circle; d = 3: Gauss–Legendre resolution.
    #[arg(long)]
    pub angular_nodes: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    pub input: PathBuf,
    /// Field degree; estimated from the angular content when omitted.
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::LeastSquares)]
    pub method: MethodArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RetrieveArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = BranchArg::Auto)]
    pub branch: BranchArg,
    #[arg(long, default_value_t = ACCEPT)]
    pub tol: f64,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodArg::LeastSquares)]
    pub method: MethodArg,
    /// d ≥ 3: basis for the reconstruction.
    #[arg(long, value_enum)]
    pub basis: Option<BasisArg>,
    #[arg(long, value_enum, default_value_t = NormArg::Orthonormal)]
    pub normalization: NormArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// d ≥ 3: take the basis from this field file instead.
    #[arg(long)]
    pub like: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value_t = ACCEPT)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CanonArgs {
    pub field: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpecfunArgs {
    #[command(subcommand)]
    pub function: Specfun,
}

#[derive(Debug, Subcommand)]
pub enum Specfun {
    /// J_ν(r) for integer or half-integer ν.
    Bessel {
        #[arg(long, allow_hyphen_values = true)]
        order: f64,
        #[arg(required = true)]
        r: Vec<f64>,
    },
    /// C_m^λ(z).
    Gegenbauer {
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(required = true, allow_hyphen_values = true)]
        z: Vec<f64>,
    },
    /// Power-series coefficients of J_{n+α}(r) J_{m+α}(r) in (r/2)^{n+m+2α+2k}.
    Product {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent { .. } => EXIT_INCONSISTENT,
        Error::BranchNotApplicable(_) | Error::NotSparse { .. } | Error::NotZonal { .. } | Error::NotRealPair(_) => {
            EXIT_NOT_APPLICABLE
        }
        _ => EXIT_USAGE,
    }
}

/// Parse `args` (program name first) and run; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            if let Error::Inconsistent { residual } = e {
                println!("status=inconsistent\nresidual={residual:.6e}");
            }
            eprintln!("herglotz: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Sample(a) => sample(a),
        Command::Extract(a) => extract(a),
        Command::Retrieve(a) => retrieve_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Canon(a) => canon(a),
        Command::Specfun(a) => specfun(&a.function),
    }
}

/// The artifact goes to `out` (atomically) with the report on stdout, or
/// to stdout with the report on stderr.
fn emit(out: Option<&Path>, artifact: &str, report: &str) -> Result<()> {
    match out {
        Some(p) => {
            write_atomic(p, artifact)?;
            print!("{report}");
        }
        None => {
            print!("{artifact}");
            eprint!("{report}");
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn basis_kind(b: BasisArg) -> BasisKind {
    match b {
        BasisArg::Fourier2d => BasisKind::Fourier2D,
        BasisArg::Zonal => BasisKind::Zonal,
        BasisArg::Palpha => BasisKind::PAlpha,
    }
}

fn build_basis(dim: usize, kind: BasisKind, norm: Normalization, seed: u64, max_degree: usize) -> Result<Arc<Basis>> {
    let spec = match kind {
        BasisKind::Fourier2D if dim == 2 => BasisSpec::fourier2d(),
        BasisKind::Fourier2D => return Err(Error::UnsupportedBasis { kind: "fourier2d", dim }),
        BasisKind::PAlpha => BasisSpec::palpha(dim, norm)?,
        BasisKind::Zonal => BasisSpec::zonal_seeded(dim, max_degree, seed, norm)?,
    };
    Ok(Arc::new(Basis::new(spec, max_degree)?))
}

fn default_kind(dim: usize) -> BasisKind {
    if dim == 2 {
        BasisKind::Fourier2D
    } else {
        BasisKind::PAlpha
    }
}

fn gen(a: &GenArgs) -> Result<()> {
    let b = &a.basis;
    let kind = b.basis.map(basis_kind).unwrap_or(default_kind(b.dim));
    let basis = build_basis(b.dim, kind, b.normalization.into(), b.seed, a.max_degree)?;
    let g = FieldGenerator {
        max_degree: a.max_degree,
        real: a.real,
        sparse: a.sparse,
        zonal: a.zonal,
        zero_mean: a.zero_mean,
        all_r: a.all_r,
        single_mode: a.single_mode,
    };
    let u = g.generate_seeded(basis, b.seed)?;
    let report = format!(
        "command=gen\ndim={}\nmax_degree={}\nbasis={}\nseed={}\n\n{}",
        u.dim(),
        u.max_degree(),
        kind.name(),
        b.seed,
        power_table(&[("power", &u)])
    );
    emit(a.out.as_deref(), &write_field(&u), &report)
}

fn sample(a: &SampleArgs) -> Result<()> {
    let u = read_field(&a.field)?;
    let (radii, grid) = sampling_grid(u.dim(), u.max_degree(), a.radial_nodes, a.angular_nodes, a.radius)?;
    let g = sample_magnitude_grid(&u, &radii, &grid);
    let peak = g.values.iter().cloned().fold(0.0, f64::max);
    let report = format!(
        "command=sample\ndim={}\nradial_nodes={}\nangular_nodes={}\nradius={}\nmax_value={peak:.6e}\n",
        g.dim,
        radii.len(),
        grid.len(),
        radii.last().copied().unwrap_or(0.0),
    );
    emit(a.out.as_deref(), &write_grid(&g), &report)
}

enum Input {
    Field(HerglotzField),
    Data(MagnitudeData),
    Grid(crate::field::MagnitudeGrid),
}

fn read_input(path: &Path) -> Result<Input> {
    let text = read(path)?;
    let head = text.lines().find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#')).unwrap_or("");
    if head.contains(FIELD_FORMAT) {
        Ok(Input::Field(parse_field(&text)?))
    } else if head.contains(MAGNITUDE_FORMAT) {
        Ok(Input::Data(parse_magnitude_data(&text)?))
    } else {
        Ok(Input::Grid(parse_grid(&text)?))
    }
}

/// Magnitude data from any input, with an extraction report when the
/// input was a grid.
fn to_data(input: Input, max_degree: Option<usize>, method: MethodArg) -> Result<(MagnitudeData, String)> {
    match input {
        Input::Field(u) => Ok((magnitude_coeffs(&u, None), "source=field\n".into())),
        Input::Data(d) => Ok((d, "source=data\n".into())),
        Input::Grid(g) => {
            let method: UnmixMethod = method.into();
            let x = extract_magnitude_data(&g, max_degree, method)?;
            let mut r = format!(
                "source=grid\nmethod={}\nextraction_residual={:.6e}\ncondition={:.6e}\n",
                method.name(),
                x.residual,
                x.condition
            );
            for w in &x.warnings {
                let _ = writeln!(r, "warning={w}");
            }
            Ok((x.data, r))
        }
    }
}

fn extract(a: &ExtractArgs) -> Result<()> {
    let (data, src) = to_data(read_input(&a.input)?, a.max_degree, a.method)?;
    let report = format!("command=extract\n{src}dim={}\nmax_degree={}\nscale={:.6e}\n", data.dim, data.max_degree, data.scale());
    emit(a.out.as_deref(), &write_magnitude_data(&data), &report)
}

fn retrieve_cmd(a: &RetrieveArgs) -> Result<()> {
    let (data, src) = to_data(read_input(&a.input)?, a.max_degree, a.method)?;
    let basis = if data.dim == 2 {
        None
    } else if let Some(p) = &a.like {
        let like = read_field(p)?;
        if like.dim() != data.dim {
            return Err(Error::Mismatch(format!("basis field has d = {}, data have d = {}", like.dim(), data.dim)));
        }
        Some(Arc::new(Basis::new(like.spec().clone(), data.max_degree)?))
    } else {
        let kind = a.basis.map(basis_kind).unwrap_or(default_kind(data.dim));
        Some(build_basis(data.dim, kind, a.normalization.into(), a.seed, data.max_degree)?)
    };
    let opts = RetrieveOptions { branch: a.branch.into(), tol: a.tol };
    let r = retrieve(&data, basis.as_ref(), &opts)?;
    let report = format!("command=retrieve\n{src}{}", retrieval_report(&r));
    emit(a.out.as_deref(), &write_field(&r.field), &report)
}

fn retrieval_report(r: &RetrievalResult) -> String {
    let mut s = format!(
        "status=ok\nbranch={}\nclass={}\nresidual={:.6e}\ndim={}\nmax_degree={}\n\n",
        r.branch.name(),
        r.class.name(),
        r.residual,
        r.field.dim(),
        r.field.max_degree()
    );
    if r.modes.is_empty() {
        s.push_str(&power_table(&[("power", &r.field)]));
    } else {
        let _ = writeln!(s, "{:>4}  {:>5}  {:>24}  {:>12}", "m", "type", "kappa", "theta");
        for t in &r.modes {
            let kappa = t.kappa.map(complex).unwrap_or_else(|| "-".into());
            let theta = t.theta.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(s, "{:>4}  {:>5}  {:>24}  {:>12}", t.m, t.flags(), kappa, theta);
        }
    }
    s
}

fn complex(c: Complex64) -> String {
    format!("{:.9}{:+.9}i", c.re, c.im)
}

fn power_table(fields: &[(&str, &HerglotzField)]) -> String {
    let top = fields.iter().map(|f| f.1.max_degree()).max().unwrap_or(0);
    let mut s = format!("{:>4}", "m");
    for (name, _) in fields {
        let _ = write!(s, "  {name:>22}");
    }
    s.push('\n');
    for m in 0..=top {
        let _ = write!(s, "{m:>4}");
        for (_, f) in fields {
            let _ = write!(s, "  {:>22.15e}", f.degree_power(m));
        }
        s.push('\n');
    }
    s
}

fn verify(a: &VerifyArgs) -> Result<()> {
    let (u, v) = (read_field(&a.a)?, read_field(&a.b)?);
    if u.dim() != v.dim() {
        return Err(Error::Mismatch(format!("d = {} vs d = {}", u.dim(), v.dim())));
    }
    let cmp = compare_magnitudes(&u, &v, a.tol)?;
    let t = trivially_equivalent(&u, &v, a.tol)?;
    let top = u.max_degree().max(v.max_degree());
    let power_dev = (0..=top).map(|m| (u.degree_power(m) - v.degree_power(m)).abs()).fold(0.0, f64::max);
    let mut s = format!(
        "command=verify\nequal_magnitude={}\ncoefficient_deviation={:.6e}\ngrid_deviation={:.6e}\nverdict={}\n",
        cmp.coefficient_equal,
        cmp.coefficient_deviation,
        cmp.grid_deviation,
        t.verdict.name()
    );
    if let Some(c) = t.c {
        let _ = writeln!(s, "c={}", complex(c));
    }
    if let Some(c) = t.c_conjugate {
        let _ = writeln!(s, "c_conjugate={}", complex(c));
    }
    let _ = writeln!(s, "equivalence_residual={:.6e}\npower_deviation={power_dev:.6e}\n", t.residual);
    s.push_str(&power_table(&[("power_a", &u), ("power_b", &v)]));
    print!("{s}");
    Ok(())
}

fn canon(a: &CanonArgs) -> Result<()> {
    let u = read_field(&a.field)?;
    let c = canonicalize(&u);
    emit(a.out.as_deref(), &write_field(&c), &format!("command=canon\nmax_abs={:.6e}\n", c.max_abs()))
}

fn specfun(f: &Specfun) -> Result<()> {
    let mut s = String::new();
    match f {
        Specfun::Bessel { order, r } => {
            let nu = BesselOrder::new(*order)?;
            let _ = writeln!(s, "function=bessel_j\norder={order}\n\n{:>24}  {:>24}", "r", "value");
            for &x in r {
                let _ = writeln!(s, "{x:>24.16e}  {:>24.16e}", bessel_j(nu, x, SeriesBudget::generous())?);
            }
        }
        Specfun::Gegenbauer { degree, lambda, z } => {
            let _ = writeln!(s, "function=gegenbauer\ndegree={degree}\nlambda={lambda}\n\n{:>24}  {:>24}", "z", "value");
            for &x in z {
                let _ = writeln!(s, "{x:>24.16e}  {:>24.16e}", gegenbauer(*degree, *lambda, x));
            }
        }
        Specfun::Product { n, m, alpha, count } => {
            let c = bessel_product_coefficients(*n, *m, *alpha, *count)?;
            let _ = writeln!(s, "function=bessel_product\nn={n}\nm={m}\nalpha={alpha}\n\n{:>4}  {:>24}", "k", "coefficient");
            for (k, v) in c.iter().enumerate() {
                let _ = writeln!(s, "{k:>4}  {v:>24.16e}");
            }
        }
    }
    print!("{s}");
    Ok(())
}
