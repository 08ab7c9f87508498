//! Text formats: the field descriptor, magnitude-data files and
//! magnitude-grid CSV. Floats are written with 17 significant digits so
//! that every value round-trips exactly.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use super::{pair_count, pair_index, pairs, HerglotzField, MagnitudeData, MagnitudeGrid, PairSpectrum, SampledPairs};
use crate::error::{Error, Result};
use crate::harmonics::{harmonic_dim, Basis, BasisKind, BasisSpec, Normalization, SphereGrid};

pub const FIELD_FORMAT: &str = "herglotz-field/1";
pub const MAGNITUDE_FORMAT: &str = "herglotz-magnitude/1";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Write `contents` to `path` through a temporary file in the same
/// directory and an atomic rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn write_field(u: &HerglotzField) -> String {
    let spec = u.spec();
    let mut s = String::new();
    s.push_str(&format!("format = {FIELD_FORMAT}\n"));
    s.push_str(&format!("dim = {}\n", u.dim()));
    s.push_str(&format!("max_degree = {}\n", u.max_degree()));
    s.push_str(&format!("basis = {}\n", spec.kind.name()));
    s.push_str(&format!("normalization = {}\n", spec.normalization.name()));
    if spec.kind == BasisKind::Zonal {
        for (m, set) in spec.poles.iter().enumerate().take(u.max_degree() + 1) {
            for (j, z) in set.iter().enumerate() {
                let xs: Vec<String> = z.iter().map(|&x| num(x)).collect();
                s.push_str(&format!("pole {m} {} {}\n", j + 1, xs.join(" ")));
            }
        }
    }
    for (m, a) in u.coeffs().iter().enumerate() {
        for (j, c) in a.iter().enumerate() {
            s.push_str(&format!("coeff {m} {} {} {}\n", j + 1, num(c.re), num(c.im)));
        }
    }
    s
}

/// Key/value header lines followed by records; `#` starts a comment.
struct Lines<'a> {
    header: BTreeMap<&'a str, (usize, &'a str)>,
    records: Vec<(usize, Vec<&'a str>)>,
}

fn split_lines(text: &str) -> Result<Lines<'_>> {
    let mut header = BTreeMap::new();
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            if header.insert(k.trim(), (i + 1, v.trim())).is_some() {
                return Err(perr(i + 1, format!("duplicate key `{}`", k.trim())));
            }
        } else {
            records.push((i + 1, line.split_whitespace().collect()));
        }
    }
    Ok(Lines { header, records })
}

impl<'a> Lines<'a> {
    fn get(&self, key: &str) -> Result<(usize, &'a str)> {
        self.header.get(key).copied().ok_or_else(|| perr(0, format!("missing header key `{key}`")))
    }

    fn usize(&self, key: &str) -> Result<usize> {
        let (line, v) = self.get(key)?;
        v.parse().map_err(|_| perr(line, format!("`{key}` must be a nonnegative integer, got `{v}`")))
    }

    fn expect_format(&self, want: &str) -> Result<()> {
        let (line, v) = self.get("format")?;
        if v != want {
            return Err(perr(line, format!("expected format `{want}`, found `{v}`")));
        }
        Ok(())
    }
}

fn parse_f64(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| perr(line, format!("not a number: `{s}`")))?;
    if !v.is_finite() {
        return Err(perr(line, format!("non-finite value `{s}`")));
    }
    Ok(v)
}

fn parse_index(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| perr(line, format!("not an index: `{s}`")))
}

pub fn parse_field(text: &str) -> Result<HerglotzField> {
    let l = split_lines(text)?;
    l.expect_format(FIELD_FORMAT)?;
    let dim = l.usize("dim")?;
    let big_m = l.usize("max_degree")?;
    let (bl, b) = l.get("basis")?;
    let kind = BasisKind::parse(b).ok_or_else(|| perr(bl, format!("unknown basis `{b}`")))?;
    let normalization = match l.header.get("normalization") {
        Some(&(nl, v)) => Normalization::parse(v).ok_or_else(|| perr(nl, format!("unknown normalization `{v}`")))?,
        None => Normalization::Raw,
    };
    if dim < 2 || dim > 8 {
        return Err(perr(l.get("dim")?.0, format!("unsupported dimension {dim}")));
    }
    let counts: Vec<usize> = (0..=big_m).map(|m| harmonic_dim(dim, m)).collect();
    let mut poles: Vec<Vec<Option<Vec<f64>>>> = counts.iter().map(|&n| vec![None; n]).collect();
    let mut coeffs: Vec<Vec<Option<Complex64>>> = counts.iter().map(|&n| vec![None; n]).collect();
    for (line, rec) in &l.records {
        let line = *line;
        let slot = |m: usize, j: usize| -> Result<()> {
            if m > big_m || j == 0 || j > counts[m] {
                return Err(perr(line, format!("index ({m}, {j}) out of range")));
            }
            Ok(())
        };
        match rec[0] {
            "coeff" => {
                if rec.len() != 5 {
                    return Err(perr(line, "expected `coeff m j re im`"));
                }
                let (m, j) = (parse_index(line, rec[1])?, parse_index(line, rec[2])?);
                slot(m, j)?;
                let c = Complex64::new(parse_f64(line, rec[3])?, parse_f64(line, rec[4])?);
                if coeffs[m][j - 1].replace(c).is_some() {
                    return Err(perr(line, format!("duplicate coefficient ({m}, {j})")));
                }
            }
            "pole" => {
                if kind != BasisKind::Zonal {
                    return Err(perr(line, "poles are only meaningful for the zonal basis"));
                }
                if rec.len() != 3 + dim {
                    return Err(perr(line, format!("expected `pole m j` and {dim} components")));
                }
                let (m, j) = (parse_index(line, rec[1])?, parse_index(line, rec[2])?);
                slot(m, j)?;
                let z = rec[3..].iter().map(|s| parse_f64(line, s)).collect::<Result<Vec<_>>>()?;
                if poles[m][j - 1].replace(z).is_some() {
                    return Err(perr(line, format!("duplicate pole ({m}, {j})")));
                }
            }
            other => return Err(perr(line, format!("unknown record `{other}`"))),
        }
    }
    let spec = match kind {
        BasisKind::Fourier2D if dim == 2 => BasisSpec::fourier2d(),
        BasisKind::Fourier2D => return Err(Error::UnsupportedBasis { kind: "fourier2d", dim }),
        BasisKind::PAlpha => BasisSpec::palpha(dim, normalization)?,
        BasisKind::Zonal => {
            let table = poles
                .into_iter()
                .enumerate()
                .map(|(m, set)| {
                    set.into_iter()
                        .enumerate()
                        .map(|(j, z)| z.ok_or_else(|| perr(0, format!("missing pole ({m}, {})", j + 1))))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            BasisSpec::zonal(dim, table, normalization)?
        }
    };
    let basis = Arc::new(Basis::new(spec, big_m)?);
    let coeffs = coeffs
        .into_iter()
        .map(|a| a.into_iter().map(|c| c.unwrap_or_default()).collect())
        .collect();
    HerglotzField::new(basis, coeffs)
}

pub fn read_field(path: &Path) -> Result<HerglotzField> {
    parse_field(&std::fs::read_to_string(path)?)
}

pub fn write_magnitude_data(data: &MagnitudeData) -> String {
    let mut s = String::new();
    s.push_str(&format!("format = {MAGNITUDE_FORMAT}\n"));
    s.push_str(&format!("dim = {}\n", data.dim));
    s.push_str(&format!("max_degree = {}\n", data.max_degree));
    if let Some(sm) = &data.samples {
        s.push_str(&format!("grid_resolution = {}\n", sm.grid.resolution()));
    }
    if let Some(sp) = &data.spectra {
        for p in sp {
            s.push_str(&format!("pair {} {}\n", p.m, p.n));
            for (f, c) in p.four_terms() {
                s.push_str(&format!("term {f} {} {}\n", num(c.re), num(c.im)));
            }
        }
    }
    if let Some(sm) = &data.samples {
        for (idx, (m, n)) in pairs(data.max_degree).enumerate() {
            let vs: Vec<String> = sm.values[idx].iter().map(|&v| num(v)).collect();
            s.push_str(&format!("samples {m} {n} {}\n", vs.join(" ")));
        }
    }
    s
}

pub fn parse_magnitude_data(text: &str) -> Result<MagnitudeData> {
    let l = split_lines(text)?;
    l.expect_format(MAGNITUDE_FORMAT)?;
    let dim = l.usize("dim")?;
    let big_m = l.usize("max_degree")?;
    let grid = match l.header.get("grid_resolution") {
        Some(_) => Some(SphereGrid::new(dim, l.usize("grid_resolution")?)?),
        None => None,
    };
    let np = pair_count(big_m);
    let mut spectra: Vec<Option<PairSpectrum>> = vec![None; np];
    let mut samples: Vec<Option<Vec<f64>>> = vec![None; np];
    let mut any_spectra = false;
    let mut i = 0;
    let recs = &l.records;
    while i < recs.len() {
        let (line, rec) = (recs[i].0, &recs[i].1);
        let pair = |rec: &[&str]| -> Result<(usize, usize)> {
            let (m, n) = (parse_index(line, rec[1])?, parse_index(line, rec[2])?);
            if m > n || n > big_m {
                return Err(perr(line, format!("pair ({m}, {n}) must satisfy m ≤ n ≤ {big_m}")));
            }
            Ok((m, n))
        };
        match rec[0] {
            "pair" if rec.len() == 3 => {
                let (m, n) = pair(rec)?;
                let mut terms = [(0i64, Complex64::default()); 4];
                for (k, t) in terms.iter_mut().enumerate() {
                    let (tl, tr) = recs.get(i + 1 + k).ok_or_else(|| perr(line, "pair record needs four `term` lines"))?;
                    if tr.len() != 4 || tr[0] != "term" {
                        return Err(perr(*tl, "expected `term freq re im`"));
                    }
                    let f: i64 = tr[1].parse().map_err(|_| perr(*tl, format!("bad frequency `{}`", tr[1])))?;
                    let (q, p) = ((m + n) as i64, (n as i64 - m as i64));
                    if f.abs() != q && f.abs() != p {
                        return Err(perr(*tl, format!("frequency {f} is not ±{q} or ±{p}")));
                    }
                    *t = (f, Complex64::new(parse_f64(*tl, tr[2])?, parse_f64(*tl, tr[3])?));
                }
                // the stored function must be real: coefficient at −f = conj of +f
                for f in [(m + n) as i64, (n - m) as i64] {
                    let plus: Complex64 = terms.iter().filter(|t| t.0 == f).map(|t| t.1).sum();
                    let minus: Complex64 = terms.iter().filter(|t| t.0 == -f).map(|t| t.1).sum();
                    let tol = 1e-12 * (1.0 + plus.norm());
                    if (f == 0 && plus.im.abs() > tol) || (f != 0 && (plus - minus.conj()).norm() > tol) {
                        return Err(perr(line, format!("pair ({m}, {n}) does not describe a real function")));
                    }
                }
                let idx = pair_index(m, n, big_m);
                if spectra[idx].replace(PairSpectrum::from_terms(m, n, terms)).is_some() {
                    return Err(perr(line, format!("duplicate pair ({m}, {n})")));
                }
                any_spectra = true;
                i += 5;
            }
            "samples" if rec.len() >= 3 => {
                let (m, n) = pair(rec)?;
                let g = grid.as_ref().ok_or_else(|| perr(line, "samples need a `grid_resolution` header"))?;
                let vals = rec[3..].iter().map(|s| parse_f64(line, s)).collect::<Result<Vec<_>>>()?;
                if vals.len() != g.len() {
                    return Err(perr(line, format!("expected {} samples, got {}", g.len(), vals.len())));
                }
                if samples[pair_index(m, n, big_m)].replace(vals).is_some() {
                    return Err(perr(line, format!("duplicate samples ({m}, {n})")));
                }
                i += 1;
            }
            other => return Err(perr(line, format!("unexpected record `{other}`"))),
        }
    }
    let spectra = if any_spectra {
        Some(
            spectra
                .into_iter()
                .zip(pairs(big_m))
                .map(|(p, (m, n))| p.ok_or_else(|| perr(0, format!("missing pair ({m}, {n})"))))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    let samples = match grid {
        Some(g) => Some(SampledPairs {
            grid: g,
            values: samples
                .into_iter()
                .zip(pairs(big_m))
                .map(|(s, (m, n))| s.ok_or_else(|| perr(0, format!("missing samples ({m}, {n})"))))
                .collect::<Result<Vec<_>>>()?,
        }),
        None => None,
    };
    if spectra.is_none() && samples.is_none() {
        return Err(perr(0, "no magnitude data records"));
    }
    Ok(MagnitudeData { dim, max_degree: big_m, spectra, samples })
}

pub fn grid_header(dim: usize) -> &'static str {
    if dim == 2 {
        "r,theta,value"
    } else {
        "r,theta,phi,value"
    }
}

pub fn write_grid(g: &MagnitudeGrid) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(vec![]);
    w.write_record(grid_header(g.dim).split(',')).expect("in-memory write");
    for (i, &r) in g.radii.iter().enumerate() {
        for (k, a) in g.angles.iter().enumerate() {
            let mut row = vec![num(r)];
            row.extend(a.iter().map(|&x| num(x)));
            row.push(num(g.value(i, k)));
            w.write_record(&row).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
}

pub fn parse_grid(text: &str) -> Result<MagnitudeGrid> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> =
        rdr.headers().map_err(|e| perr(1, e.to_string()))?.iter().map(str::to_owned).collect();
    let dim = match header.join(",").as_str() {
        "r,theta,value" => 2,
        "r,theta,phi,value" => 3,
        other => return Err(perr(1, format!("unexpected header `{other}`"))),
    };
    let na = dim - 1;
    let mut radii: Vec<f64> = Vec::new();
    let mut angles: Vec<Vec<f64>> = Vec::new();
    let mut values = Vec::new();
    let mut k = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| perr(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != dim + 1 {
            return Err(perr(line, format!("expected {} columns, got {}", dim + 1, rec.len())));
        }
        let row = rec.iter().map(|s| parse_f64(line, s)).collect::<Result<Vec<_>>>()?;
        let (r, a, v) = (row[0], &row[1..=na], row[dim]);
        if radii.last() != Some(&r) {
            if let Some(&prev) = radii.last() {
                if r <= prev {
                    return Err(perr(line, "radii must increase (radius-outer ordering)"));
                }
                if k != angles.len() {
                    return Err(perr(line, format!("radius {prev} has {k} angular samples, expected {}", angles.len())));
                }
            }
            if r <= 0.0 {
                return Err(perr(line, "radii must be positive"));
            }
            radii.push(r);
            k = 0;
        }
        if radii.len() == 1 {
            angles.push(a.to_vec());
        } else if k >= angles.len() || angles[k] != a {
            return Err(perr(line, "angular nodes differ between radii"));
        }
        values.push(v);
        k += 1;
    }
    if radii.is_empty() {
        return Err(perr(1, "grid file has no samples"));
    }
    if k != angles.len() {
        return Err(perr(0, "last radius has an incomplete angular ring"));
    }
    Ok(MagnitudeGrid { dim, radii, angles, values })
}
