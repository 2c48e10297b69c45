//! Case ingestion (native TOML schema, MATPOWER subset) and result emission
//! (CSV tables, SVG pole/zero scatter plots).

use crate::diagnostics::ConvergenceProfile;
use crate::hem::{Branch, Bus, BusKind, HemError, NetworkCase};
use crate::pade::RootSet;
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),
    #[error("invalid plot spec: {0}")]
    InvalidPlot(String),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
}

fn file_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::File { path: path.display().to_string(), source }
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(file_err(path))
}

/// Writes through an exclusively created sibling temp file, then renames it
/// into place, so concurrent writers never interleave and readers never see
/// a partial file.
pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    write_file(path, text)
}

fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    use std::io::Write;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let res = std::fs::OpenOptions::new()
        .write(true)
        .create_new(true)
        .open(&tmp)
        .and_then(|mut f| f.write_all(text.as_bytes()).and_then(|_| f.sync_all()))
        .and_then(|_| std::fs::rename(&tmp, path));
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    res.map_err(file_err(path))
}

fn semantic(e: HemError) -> IoError {
    IoError::Semantic(match e {
        HemError::InvalidCase(m) => m,
        e => e.to_string(),
    })
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

// ---------------------------------------------------------------------------
// native format

/// Parse the native TOML case schema (`base_mva`, `[[buses]]`, `[[branches]]`).
///
/// ```toml
/// base_mva = 100.0
///
/// [[buses]]
/// id = 1
/// kind = "slack"
/// v_setpoint = 1.0
///
/// [[buses]]
/// id = 2
/// kind = "pq"
/// p_inject = -0.5
/// q_inject = -0.2
///
/// [[branches]]
/// from = 1
/// to = 2
/// x = 0.1
/// ```
pub fn parse_case_native(text: &str) -> Result<NetworkCase, IoError> {
    let case: NetworkCase = toml::from_str(text).map_err(|e| {
        let (line, col) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        IoError::Syntax { line, col, msg: e.message().to_string() }
    })?;
    case.validate().map_err(semantic)?;
    Ok(case)
}

pub fn write_case_native(case: &NetworkCase) -> String {
    toml::to_string(case).expect("case serializes to TOML")
}

// ---------------------------------------------------------------------------
// MATPOWER

#[derive(Debug, Clone)]
struct Matrix {
    rows: Vec<Vec<f64>>,
    line: usize,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line: 1, col: 1, _src: src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, msg: impl Into<String>) -> IoError {
        IoError::Syntax { line: self.line, col: self.col, msg: msg.into() }
    }

    fn skip_comment(&mut self) {
        while let Some(c) = self.peek() {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    /// Skip blanks, comments and (if `newlines`) line breaks and `...`
    /// continuations.
    fn skip_ws(&mut self, newlines: bool) {
        while let Some(c) = self.peek() {
            match c {
                ' ' | '\t' | '\r' => {
                    self.bump();
                }
                '\n' if newlines => {
                    self.bump();
                }
                '%' | '#' => self.skip_comment(),
                '.' if self.chars.get(self.pos + 1) == Some(&'.') && self.chars.get(self.pos + 2) == Some(&'.') => {
                    self.skip_comment();
                    self.bump();
                }
                _ => break,
            }
        }
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '.' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn skip_line(&mut self) {
        self.skip_comment();
        self.bump();
    }

    fn number(&mut self) -> Result<f64, IoError> {
        let (line, col) = (self.line, self.col);
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '+' | '-') {
                // stop at a sign that does not follow an exponent marker
                if (c == '+' || c == '-') && !s.is_empty() && !s.ends_with(['e', 'E']) {
                    break;
                }
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let lower = s.to_ascii_lowercase();
        let v = match lower.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            _ => s.parse::<f64>(),
        };
        v.map_err(|_| IoError::Syntax { line, col, msg: format!("bad number '{s}'") })
    }

    fn matrix(&mut self) -> Result<Matrix, IoError> {
        let line = self.line;
        self.bump(); // '['
        let mut rows = Vec::new();
        let mut row = Vec::new();
        loop {
            self.skip_ws(false);
            match self.peek() {
                None => return Err(self.err("unterminated matrix")),
                Some(']') => {
                    self.bump();
                    break;
                }
                Some(';') | Some('\n') => {
                    self.bump();
                    if !row.is_empty() {
                        rows.push(std::mem::take(&mut row));
                    }
                }
                Some(',') => {
                    self.bump();
                }
                Some(c) if c.is_ascii_digit() || matches!(c, '-' | '+' | '.' | 'I' | 'i' | 'N' | 'n') => {
                    row.push(self.number()?);
                }
                Some(c) => return Err(self.err(format!("unexpected '{c}' in matrix"))),
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
        Ok(Matrix { rows, line })
    }

    fn skip_delimited(&mut self, open: char, close: char) -> Result<(), IoError> {
        let mut depth = 0;
        while let Some(c) = self.bump() {
            if c == '\'' {
                while let Some(q) = self.bump() {
                    if q == '\'' {
                        break;
                    }
                }
            } else if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    return Ok(());
                }
            } else if c == '%' {
                self.skip_comment();
            }
        }
        Err(self.err(format!("unterminated '{open}'")))
    }
}

/// Scalars and matrices assigned to `mpc.<field>` in a MATPOWER case file.
fn matpower_fields(text: &str) -> Result<(HashMap<String, f64>, HashMap<String, Matrix>), IoError> {
    let mut lx = Lexer::new(text);
    let mut scalars = HashMap::new();
    let mut mats = HashMap::new();
    loop {
        lx.skip_ws(true);
        let Some(c) = lx.peek() else { break };
        if c == ';' {
            lx.bump();
            continue;
        }
        if !(c.is_alphabetic() || c == '_') {
            return Err(lx.err(format!("unexpected '{c}'")));
        }
        let name = lx.ident();
        lx.skip_ws(false);
        if lx.peek() != Some('=') || name == "function" {
            // function header, `return`, `end`, ...
            lx.skip_line();
            continue;
        }
        lx.bump();
        lx.skip_ws(true);
        let field = name.strip_prefix("mpc.").map(str::to_string);
        match lx.peek() {
            Some('[') => {
                let m = lx.matrix()?;
                if let Some(f) = field {
                    mats.insert(f, m);
                }
            }
            Some('{') => lx.skip_delimited('{', '}')?,
            Some('\'') => {
                lx.bump();
                while let Some(q) = lx.bump() {
                    if q == '\'' {
                        break;
                    }
                }
            }
            Some(_) => {
                let v = lx.number()?;
                if let Some(f) = field {
                    scalars.insert(f, v);
                }
            }
            None => return Err(lx.err("missing value")),
        }
        lx.skip_ws(false);
        if lx.peek() == Some(';') {
            lx.bump();
        }
    }
    Ok((scalars, mats))
}

fn need_cols(m: &Matrix, name: &str, cols: usize) -> Result<(), IoError> {
    for (k, r) in m.rows.iter().enumerate() {
        if r.len() < cols {
            return Err(IoError::Syntax {
                line: m.line + k,
                col: 1,
                msg: format!("mpc.{name} row {} has {} columns, need {cols}", k + 1, r.len()),
            });
        }
    }
    Ok(())
}

fn as_id(x: f64, what: &str) -> Result<u32, IoError> {
    if x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
        Ok(x as u32)
    } else {
        Err(IoError::Semantic(format!("invalid {what} id {x}")))
    }
}

/// Parse the MATPOWER subset: `baseMVA`, `bus`, `gen`, `branch`.
/// Quantities are converted to per unit on `baseMVA`; bus injections are
/// generation minus load; isolated buses and out-of-service generators and
/// branches are dropped. Phase shifters are rejected.
pub fn parse_matpower(text: &str) -> Result<NetworkCase, IoError> {
    let (scalars, mats) = matpower_fields(text)?;
    let base = *scalars.get("baseMVA").ok_or_else(|| IoError::Semantic("missing mpc.baseMVA".into()))?;
    if !(base > 0.0) {
        return Err(IoError::Semantic(format!("baseMVA must be positive, got {base}")));
    }
    let get = |k: &str| mats.get(k).ok_or_else(|| IoError::Semantic(format!("missing mpc.{k}")));
    let bus_m = get("bus")?;
    let branch_m = get("branch")?;
    let empty = Matrix { rows: vec![], line: 0 };
    let gen_m = mats.get("gen").unwrap_or(&empty);
    need_cols(bus_m, "bus", 8)?;
    need_cols(gen_m, "gen", 8)?;
    need_cols(branch_m, "branch", 11)?;

    // (ΣPG, ΣQG, VG of first in-service unit)
    let mut gens: HashMap<u32, (f64, f64, Option<f64>)> = HashMap::new();
    for r in &gen_m.rows {
        if r[7] <= 0.0 {
            continue;
        }
        let g = gens.entry(as_id(r[0], "generator bus")?).or_insert((0.0, 0.0, None));
        g.0 += r[1];
        g.1 += r[2];
        if g.2.is_none() {
            g.2 = Some(r[5]);
        }
    }

    let mut buses = Vec::new();
    for r in &bus_m.rows {
        let id = as_id(r[0], "bus")?;
        let kind = match r[1] as i64 {
            1 => BusKind::Pq,
            2 => BusKind::Pv,
            3 => BusKind::Slack,
            4 => continue,
            t => return Err(IoError::UnsupportedFeature(format!("bus type {t} at bus {id}"))),
        };
        let (pg, qg, vg) = gens.get(&id).copied().unwrap_or((0.0, 0.0, None));
        let kind = if kind == BusKind::Pv && vg.is_none() {
            log::info!("bus {id}: PV without an in-service generator, treated as PQ");
            BusKind::Pq
        } else {
            kind
        };
        buses.push(Bus {
            id,
            kind,
            p_inject: (pg - r[2]) / base,
            q_inject: (qg - r[3]) / base,
            v_setpoint: match kind {
                BusKind::Pq => 1.0,
                _ => vg.unwrap_or(r[7]),
            },
            shunt_g: r[4] / base,
            shunt_b: r[5] / base,
        });
    }

    let mut branches = Vec::new();
    for (k, r) in branch_m.rows.iter().enumerate() {
        if r[10] <= 0.0 {
            continue;
        }
        if r[9] != 0.0 {
            return Err(IoError::UnsupportedFeature(format!(
                "phase-shift angle {} on branch row {} ({}-{})",
                r[9],
                k + 1,
                r[0],
                r[1]
            )));
        }
        branches.push(Branch {
            from: as_id(r[0], "branch endpoint")?,
            to: as_id(r[1], "branch endpoint")?,
            r: r[2],
            x: r[3],
            charging_b: r[4],
            tap: if r[8] == 0.0 { 1.0 } else { r[8] },
        });
    }
    let case = NetworkCase { base_power: base, buses, branches };
    case.validate().map_err(semantic)?;
    Ok(case)
}

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip decimal; exponent form outside `[1e-5, 1e16)`.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_num(z.re)
    } else {
        let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) { "-" } else { "+" };
        format!("{}{}{}i", fmt_num(z.re), sign, fmt_num(z.im.abs()))
    }
}

fn parse_complex(s: &str) -> Option<Complex64> {
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let k = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
        let re = body[..k].parse().ok()?;
        let im: f64 = body[k..].parse().ok()?;
        Some(Complex64::new(re, im))
    } else {
        s.parse().ok().map(|re| Complex64::new(re, 0.0))
    }
}

pub const ROOTS_HEADER: &str = "kind,plane,re,im,M";
pub const CF_HEADER: &str = "alpha,M,error,cf_hat";
pub const CAPACITY_HEADER: &str = "N,energy,cap_est";

/// Rows: alpha-plane poles, alpha-plane zeros, inverse-plane poles,
/// inverse-plane zeros, each in stored order.
pub fn roots_csv(rs: &RootSet) -> String {
    let mut s = format!("{ROOTS_HEADER}\n");
    let groups = [
        ("pole", "alpha", &rs.poles_alpha),
        ("zero", "alpha", &rs.zeros_alpha),
        ("pole", "inv", &rs.poles_inv),
        ("zero", "inv", &rs.zeros_inv),
    ];
    for (kind, plane, v) in groups {
        for z in v.iter() {
            let _ = writeln!(s, "{kind},{plane},{},{},{}", fmt_num(z.re), fmt_num(z.im), rs.m);
        }
    }
    s
}

pub fn write_roots_csv(rs: &RootSet, path: &Path) -> Result<(), IoError> {
    write_file(path, &roots_csv(rs))
}

fn csv_err(line: usize, msg: &str) -> IoError {
    IoError::Syntax { line, col: 1, msg: msg.to_string() }
}

fn check_header(text: &str, header: &str) -> Result<(), IoError> {
    match text.lines().next() {
        Some(h) if h == header => Ok(()),
        _ => Err(csv_err(1, &format!("expected header '{header}'"))),
    }
}

pub fn parse_roots_csv(text: &str) -> Result<RootSet, IoError> {
    check_header(text, ROOTS_HEADER)?;
    let mut rs = RootSet::default();
    for (k, line) in text.lines().enumerate().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(csv_err(k + 1, "expected 5 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| csv_err(k + 1, "bad number"));
        let z = Complex64::new(num(f[2])?, num(f[3])?);
        rs.m = f[4].parse().map_err(|_| csv_err(k + 1, "bad M"))?;
        let list = match (f[0], f[1]) {
            ("pole", "alpha") => &mut rs.poles_alpha,
            ("zero", "alpha") => &mut rs.zeros_alpha,
            ("pole", "inv") => &mut rs.poles_inv,
            ("zero", "inv") => &mut rs.zeros_inv,
            _ => return Err(csv_err(k + 1, "bad kind/plane")),
        };
        list.push(z);
    }
    Ok(rs)
}

/// One row per (profile, sample); `cf_hat` repeated per row, empty if unset.
pub fn cf_csv(profiles: &[ConvergenceProfile]) -> String {
    let mut s = format!("{CF_HEADER}\n");
    for p in profiles {
        let cf = p.cf_hat.map(fmt_num).unwrap_or_default();
        for smp in &p.samples {
            let _ = writeln!(s, "{},{},{},{}", fmt_complex(p.alpha), smp.m, fmt_num(smp.error), cf);
        }
    }
    s
}

pub fn write_cf_csv(profiles: &[ConvergenceProfile], path: &Path) -> Result<(), IoError> {
    write_file(path, &cf_csv(profiles))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfRow {
    pub alpha: Complex64,
    pub m: usize,
    pub error: f64,
    pub cf_hat: Option<f64>,
}

pub fn parse_cf_csv(text: &str) -> Result<Vec<CfRow>, IoError> {
    check_header(text, CF_HEADER)?;
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(k, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(csv_err(k + 1, "expected 4 fields"));
            }
            let bad = |_| csv_err(k + 1, "bad number");
            Ok(CfRow {
                alpha: parse_complex(f[0]).ok_or_else(|| csv_err(k + 1, "bad alpha"))?,
                m: f[1].parse().map_err(|_| csv_err(k + 1, "bad M"))?,
                error: f[2].parse().map_err(bad)?,
                cf_hat: if f[3].is_empty() { None } else { Some(f[3].parse().map_err(bad)?) },
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityRow {
    pub n: usize,
    pub energy: f64,
    pub cap_est: f64,
}

pub fn capacity_csv(rows: &[CapacityRow]) -> String {
    let mut s = format!("{CAPACITY_HEADER}\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.n, fmt_num(r.energy), fmt_num(r.cap_est));
    }
    s
}

pub fn write_capacity_csv(rows: &[CapacityRow], path: &Path) -> Result<(), IoError> {
    write_file(path, &capacity_csv(rows))
}

pub fn parse_capacity_csv(text: &str) -> Result<Vec<CapacityRow>, IoError> {
    check_header(text, CAPACITY_HEADER)?;
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(k, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(csv_err(k + 1, "expected 3 fields"));
            }
            let bad = |_| csv_err(k + 1, "bad number");
            Ok(CapacityRow {
                n: f[0].parse().map_err(|_| csv_err(k + 1, "bad N"))?,
                energy: f[1].parse().map_err(bad)?,
                cap_est: f[2].parse().map_err(bad)?,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// SVG

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    Alpha,
    Inverse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub title: String,
    pub plane: Plane,
    pub width: f64,
    pub height: f64,
}

impl PlotSpec {
    /// α-plane window of the `[M/M]` root tableau: −1 ± 2j to 1.5 ± 2j.
    pub fn table_alpha(title: impl Into<String>) -> Self {
        Self::new((-1.0, 1.5), (-2.0, 2.0), title, Plane::Alpha)
    }

    /// Inverse-plane window of the root tableau: −3.2 ± 1.2j to 1.2 ± 1.2j.
    pub fn table_inverse(title: impl Into<String>) -> Self {
        Self::new((-3.2, 1.2), (-1.2, 1.2), title, Plane::Inverse)
    }

    /// Narrow ±1.3 ± 0.2j inverse-plane window for high orders.
    pub fn narrow_inverse(title: impl Into<String>) -> Self {
        Self::new((-1.3, 1.3), (-0.2, 0.2), title, Plane::Inverse)
    }

    pub fn new(x_range: (f64, f64), y_range: (f64, f64), title: impl Into<String>, plane: Plane) -> Self {
        PlotSpec { x_range, y_range, title: title.into(), plane, width: 640.0, height: 480.0 }
    }

    fn validate(&self) -> Result<(), IoError> {
        let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.1 > r.0;
        if !ok(self.x_range) || !ok(self.y_range) || !(self.width > 0.0 && self.height > 0.0) {
            return Err(IoError::InvalidPlot(format!("{:?} x {:?}", self.x_range, self.y_range)));
        }
        Ok(())
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Poles as crosses, zeros as circles; points outside the window are left
/// out; axes drawn where the zero lines fall inside the window.
pub fn svg_scatter(rs: &RootSet, spec: &PlotSpec) -> Result<String, IoError> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let (x0, x1) = spec.x_range;
    let (y0, y1) = spec.y_range;
    let px = |x: f64| (x - x0) / (x1 - x0) * w;
    let py = |y: f64| (y1 - y) / (y1 - y0) * h;
    let inside = |z: &Complex64| z.re >= x0 && z.re <= x1 && z.im >= y0 && z.im <= y1;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", xml_escape(&spec.title));
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white" stroke="black"/>"#);
    if y0 <= 0.0 && 0.0 <= y1 {
        let _ = writeln!(s, r#"<line class="axis" x1="0" y1="{0:.3}" x2="{w}" y2="{0:.3}" stroke="gray"/>"#, py(0.0));
    }
    if x0 <= 0.0 && 0.0 <= x1 {
        let _ = writeln!(s, r#"<line class="axis" x1="{0:.3}" y1="0" x2="{0:.3}" y2="{h}" stroke="gray"/>"#, px(0.0));
    }
    let _ = writeln!(s, r#"<text x="8" y="18" font-size="14">{}</text>"#, xml_escape(&spec.title));
    let (poles, zeros) = match spec.plane {
        Plane::Alpha => (&rs.poles_alpha, &rs.zeros_alpha),
        Plane::Inverse => (&rs.poles_inv, &rs.zeros_inv),
    };
    let r = 4.0;
    for z in poles.iter().filter(|z| inside(z)) {
        let (cx, cy) = (px(z.re), py(z.im));
        let _ = writeln!(
            s,
            r#"<path class="pole" d="M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}" stroke="red"/>"#,
            cx - r,
            cy - r,
            cx + r,
            cy + r,
            cx - r,
            cy + r,
            cx + r,
            cy - r
        );
    }
    for z in zeros.iter().filter(|z| inside(z)) {
        let _ = writeln!(
            s,
            r#"<circle class="zero" cx="{:.3}" cy="{:.3}" r="{r}" fill="none" stroke="blue"/>"#,
            px(z.re),
            py(z.im)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn write_svg_scatter(rs: &RootSet, spec: &PlotSpec, path: &Path) -> Result<(), IoError> {
    write_file(path, &svg_scatter(rs, spec)?)
}
