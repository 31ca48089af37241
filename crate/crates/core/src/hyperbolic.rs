//! Short slopes on a hyperbolic cusp and the volume audit.
//!
//! Cusp geometry is ingested, never computed. A cusp shape `s = l/m` is
//! scaled to area one with a positive real meridian; lengths of slopes are
//! then `|p·m + q·l|`. A surgery that nontrivially covers another must have
//! its base slope among the short slopes, so the audit only looks there.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::par::{map_collect, Exec};
use crate::slope::Slope;

/// Lower bound on the maximal cusp area of a hyperbolic knot complement.
pub const MIN_CUSP_AREA: f64 = 3.464_101_615_137_754_5; // 2√3

/// Default tolerance for ingested volumes.
pub const VOLUME_TOLERANCE: f64 = 1e-4;

/// Tolerance for length comparisons.
pub const LENGTH_TOLERANCE: f64 = 1e-9;

/// Cusp scaled to area one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedCusp {
    /// Meridian length, real and positive.
    pub m: f64,
    /// Longitude.
    pub l: Complex64,
}

impl NormalizedCusp {
    pub fn area(&self) -> f64 {
        (self.m * self.l.im).abs()
    }
}

/// `m = 1/√|Im s|`, `l = s·m`.
pub fn normalize_cusp(s: Complex64) -> Result<NormalizedCusp> {
    if !s.re.is_finite() || !s.im.is_finite() || s.im == 0.0 {
        return Err(Error::InvalidInput(format!("cusp shape {s} is not in the upper or lower half plane")));
    }
    let m = 1.0 / s.im.abs().sqrt();
    Ok(NormalizedCusp { m, l: s * m })
}

fn length_pq(p: f64, q: f64, c: &NormalizedCusp) -> f64 {
    (c.l * q + p * c.m).norm()
}

pub fn slope_length(slope: &Slope, c: &NormalizedCusp) -> f64 {
    let f = |x: &BigInt| x.to_f64().unwrap_or(f64::INFINITY);
    length_pq(f(slope.p()), f(slope.q()), c)
}

/// Bounds `(a, b)` such that every slope with `|p| > a` or `|q| > b` is
/// longer than `k`.
pub fn short_slope_box(k: f64, c: &NormalizedCusp) -> Result<(f64, f64)> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidInput(format!("length bound {k} must be positive")));
    }
    let im = c.l.im.abs();
    let a = (k * c.l.re).abs() / (c.m * im) + k / c.m;
    let b = k / im;
    Ok((a, b))
}

/// `2π/√(1 − (1/2)^{2/3})`: slopes longer than this fill to more than half
/// the volume of the complement.
pub fn vcsc_length_bound() -> f64 {
    2.0 * PI / (1.0 - 0.5f64.powf(2.0 / 3.0)).sqrt()
}

/// Lower bound on `vol(filling)/vol(complement)` for a filling along a slope
/// of normalized length `len > 2π`.
pub fn volume_ratio_lower_bound(len: f64) -> Option<f64> {
    (len > 2.0 * PI).then(|| (1.0 - (2.0 * PI / len).powi(2)).powf(1.5))
}

/// Threshold on the area-one cusp equivalent to length `k` on a cusp of
/// area at least [`MIN_CUSP_AREA`].
pub fn normalized_threshold(k: f64) -> f64 {
    k / MIN_CUSP_AREA.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortSlope {
    pub slope: Slope,
    pub length: f64,
}

/// All slopes of length at most `k`, shortest first.
///
/// Ties are broken by `q`, then `|p|`, then positive `p` first.
pub fn enumerate_short_slopes(c: &NormalizedCusp, k: f64) -> Result<Vec<ShortSlope>> {
    let (a, b) = short_slope_box(k, c)?;
    let (a, b) = (a.floor() as i64, b.floor() as i64);
    let mut out: Vec<(i64, i64, f64)> = Vec::new();
    for q in 0..=b {
        for p in -a..=a {
            if q == 0 && p != 1 {
                continue;
            }
            if p.gcd(&q) != 1 {
                continue;
            }
            let len = length_pq(p as f64, q as f64, c);
            if len <= k + LENGTH_TOLERANCE {
                out.push((p, q, len));
            }
        }
    }
    out.sort_by(|x, y| {
        x.2.total_cmp(&y.2)
            .then(x.1.cmp(&y.1))
            .then(x.0.abs().cmp(&y.0.abs()))
            .then(y.0.cmp(&x.0))
    });
    Ok(out
        .into_iter()
        .map(|(p, q, length)| ShortSlope { slope: Slope::new(p, q).expect("primitive"), length })
        .collect())
}

/// Degrees `n ≥ 1` with `n·vol_base` matching `vol_cover` and below the
/// complement volume.
pub fn volume_cover_filter(
    vol_cover: f64,
    vol_base: f64,
    vol_complement: f64,
    tol: f64,
) -> Result<BTreeSet<u64>> {
    if !(vol_base > 0.0 && vol_cover > 0.0 && tol > 0.0) {
        return Err(Error::InvalidInput("volumes and tolerance must be positive".into()));
    }
    if vol_cover >= vol_complement || vol_base >= vol_complement {
        return Err(Error::InvalidInput(format!(
            "filling volume must be below the complement volume {vol_complement}"
        )));
    }
    let mut out = BTreeSet::new();
    let mut n = 1u64;
    while (n as f64) * vol_base < vol_complement {
        if (vol_cover - n as f64 * vol_base).abs() <= tol {
            out.insert(n);
        }
        n += 1;
    }
    Ok(out)
}

/// Degrees `n ≥ 2` allowed by volume alone for covers of a filling of
/// volume `vol_base`.
pub fn admissible_degrees(vol_base: f64, vol_complement: f64) -> Vec<u64> {
    (2..).take_while(|&n| (n as f64) * vol_base < vol_complement).collect()
}

/// An odd `|H₁|` admits no map onto `Z/2`, hence no 2-fold cover.
pub fn degree2_h1_obstruction(h1: &BigInt) -> bool {
    h1.is_odd()
}

/// A cover never has smaller first Betti number than its base.
pub fn rank_obstruction(rank_cover: u32, rank_base: u32) -> bool {
    rank_base > rank_cover
}

#[derive(Debug, Clone, PartialEq)]
pub enum FillingVolume {
    Hyperbolic(f64),
    Exceptional,
}

/// Ingested data for one knot.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspRecord {
    pub knot_name: String,
    pub cusp_shape: Complex64,
    pub volume_complement: f64,
    pub fillings: Vec<(Slope, FillingVolume)>,
}

impl CuspRecord {
    pub fn validate(&self) -> Result<()> {
        normalize_cusp(self.cusp_shape)?;
        if !(self.volume_complement > 0.0) {
            return Err(Error::InvalidInput("complement volume must be positive".into()));
        }
        let mut seen = BTreeSet::new();
        for (slope, vol) in &self.fillings {
            if slope.is_infinite() {
                return Err(Error::InvalidInput("the trivial filling 1/0 is not listed".into()));
            }
            if !seen.insert(slope.clone()) {
                return Err(Error::InvalidInput(format!("slope {slope} listed twice")));
            }
            if let FillingVolume::Hyperbolic(v) = vol {
                if !(*v > 0.0 && *v < self.volume_complement) {
                    return Err(Error::InvalidInput(format!(
                        "filling {slope} has volume {v}, outside (0, {})",
                        self.volume_complement
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn filling(&self, slope: &Slope) -> Option<&FillingVolume> {
        self.fillings.iter().find(|(s, _)| s == slope).map(|(_, v)| v)
    }
}

/// A record that failed to parse or validate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Parses one record per line: `name re im vol_complement` followed by
/// filling entries `p q volume` or `p q EXC`. `#` starts a comment.
pub fn parse_census(text: &str) -> Vec<Result<CuspRecord, RecordError>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                return None;
            }
            Some(parse_record(line).map_err(|e| RecordError { line: i + 1, message: e.to_string() }))
        })
        .collect()
}

fn parse_record(line: &str) -> Result<CuspRecord> {
    let tok: Vec<&str> = line.split_whitespace().collect();
    if tok.len() < 4 || (tok.len() - 4) % 3 != 0 {
        return Err(Error::Parse(format!(
            "expected name, re, im, volume and (p q volume) triples, got {} fields",
            tok.len()
        )));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
    let int = |s: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {s:?}")));
    let mut fillings = Vec::new();
    for t in tok[4..].chunks(3) {
        let slope = Slope::new(int(t[0])?, int(t[1])?)?;
        let vol = if t[2].eq_ignore_ascii_case("EXC") {
            FillingVolume::Exceptional
        } else {
            FillingVolume::Hyperbolic(num(t[2])?)
        };
        fillings.push((slope, vol));
    }
    let rec = CuspRecord {
        knot_name: tok[0].to_string(),
        cusp_shape: Complex64::new(num(tok[1])?, num(tok[2])?),
        volume_complement: num(tok[3])?,
        fillings,
    };
    rec.validate()?;
    Ok(rec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuditStatus {
    Eliminated,
    Deferred,
    Candidate,
    Missing,
    Verified,
    Open,
}

impl fmt::Display for AuditStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditStatus::Eliminated => "eliminated",
            AuditStatus::Deferred => "deferred",
            AuditStatus::Candidate => "candidate",
            AuditStatus::Missing => "missing",
            AuditStatus::Verified => "verified",
            AuditStatus::Open => "open",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub knot: String,
    /// A slope, or `*` for every cover.
    pub cover: String,
    pub base: String,
    pub degrees: Vec<u64>,
    pub status: AuditStatus,
    pub reason: String,
}

impl AuditRow {
    pub fn tsv(&self) -> String {
        let degrees: Vec<String> = self.degrees.iter().map(u64::to_string).collect();
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.knot,
            self.cover,
            self.base,
            degrees.join(","),
            self.status,
            self.reason
        )
    }
}

pub const AUDIT_TSV_HEADER: &str = "knot\tcover_slope\tbase_slope\tcandidate_degrees\tstatus\treason";

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub knot: String,
    pub short_slopes: usize,
    /// One row per finite short slope, then the summary row.
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn verified(&self) -> bool {
        self.rows.last().is_some_and(|r| r.status == AuditStatus::Verified)
    }

    pub fn count(&self, status: AuditStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    pub volume_tolerance: f64,
    /// Length bound on the cusp of area at least [`MIN_CUSP_AREA`].
    pub length_bound: f64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { volume_tolerance: VOLUME_TOLERANCE, length_bound: vcsc_length_bound() }
    }
}

fn fmt_degrees(d: &[u64]) -> String {
    let v: Vec<String> = d.iter().map(u64::to_string).collect();
    format!("{{{}}}", v.join(","))
}

/// Runs the volume, H₁ and rank eliminations over the short slopes of `rec`.
pub fn audit_knot(rec: &CuspRecord, cfg: &AuditConfig) -> Result<AuditReport> {
    rec.validate()?;
    let cusp = normalize_cusp(rec.cusp_shape)?;
    let short = enumerate_short_slopes(&cusp, normalized_threshold(cfg.length_bound))?;
    let vol_c = rec.volume_complement;
    let half = vol_c / 2.0;
    let tol = cfg.volume_tolerance;
    let row = |base: &Slope, cover: String, degrees: Vec<u64>, status, reason: String| AuditRow {
        knot: rec.knot_name.clone(),
        cover,
        base: base.to_string(),
        degrees,
        status,
        reason,
    };
    let mut rows = Vec::new();
    for s in short.iter().filter(|s| !s.slope.is_infinite()) {
        let base = &s.slope;
        let h1 = base.p().abs();
        let vol_b = match rec.filling(base) {
            None => {
                rows.push(row(base, "*".into(), vec![], AuditStatus::Missing, "no filling data".into()));
                continue;
            }
            Some(FillingVolume::Exceptional) => {
                rows.push(row(
                    base,
                    "*".into(),
                    vec![],
                    AuditStatus::Deferred,
                    "exceptional filling; not covered by the volume argument".into(),
                ));
                continue;
            }
            Some(FillingVolume::Hyperbolic(v)) => *v,
        };
        let sensitive = if (vol_b - half).abs() <= tol { " (tolerance-sensitive)" } else { "" };
        if vol_b > half {
            rows.push(row(
                base,
                "*".into(),
                vec![],
                AuditStatus::Eliminated,
                format!("vol {vol_b} > Vol/2 = {half:.7}{sensitive}"),
            ));
            continue;
        }
        let mut chain = format!("vol {vol_b} <= Vol/2 = {half:.7}{sensitive}");
        if h1.is_zero() {
            chain.push_str("; b1 = 1 exceeds b1 = 0 of every other surgery");
            rows.push(row(base, "*".into(), vec![], AuditStatus::Eliminated, chain));
            continue;
        }
        let mut degrees = admissible_degrees(vol_b, vol_c);
        chain.push_str(&format!("; volume allows degrees {}", fmt_degrees(&degrees)));
        if degrees.contains(&2) && degree2_h1_obstruction(&h1) {
            degrees.retain(|&d| d != 2);
            chain.push_str(&format!("; |H1| = {h1} is odd, no 2-fold cover"));
        }
        // Specific fillings whose volume is a multiple of this one.
        for (cover, v) in &rec.fillings {
            let FillingVolume::Hyperbolic(vc) = v else { continue };
            if cover == base {
                continue;
            }
            let mut ds: Vec<u64> = volume_cover_filter(*vc, vol_b, vol_c, tol)?
                .into_iter()
                .filter(|&d| d >= 2)
                .collect();
            if ds.is_empty() {
                continue;
            }
            let mut reason = format!("vol {vc} = n * {vol_b} within {tol}");
            if cover.p().is_zero() {
                ds.clear();
                reason.push_str("; rank obstruction");
            }
            if degree2_h1_obstruction(&h1) && ds.contains(&2) {
                ds.retain(|&d| d != 2);
                reason.push_str(&format!("; |H1| = {h1} is odd, no 2-fold cover"));
            }
            let status = if ds.is_empty() { AuditStatus::Eliminated } else { AuditStatus::Candidate };
            rows.push(row(base, cover.to_string(), ds, status, reason));
        }
        let status = if degrees.is_empty() { AuditStatus::Eliminated } else { AuditStatus::Candidate };
        rows.push(row(base, "*".into(), degrees, status, chain));
    }
    let open = rows
        .iter()
        .filter(|r| matches!(r.status, AuditStatus::Candidate | AuditStatus::Missing))
        .count();
    let deferred = rows.iter().filter(|r| r.status == AuditStatus::Deferred).count();
    let summary = if open == 0 {
        AuditRow {
            knot: rec.knot_name.clone(),
            cover: "*".into(),
            base: "*".into(),
            degrees: vec![],
            status: AuditStatus::Verified,
            reason: format!(
                "no surviving candidate pairs among {} short slopes; {deferred} exceptional deferred",
                short.len()
            ),
        }
    } else {
        AuditRow {
            knot: rec.knot_name.clone(),
            cover: "*".into(),
            base: "*".into(),
            degrees: vec![],
            status: AuditStatus::Open,
            reason: format!("{open} candidate rows remain"),
        }
    };
    rows.push(summary);
    Ok(AuditReport { knot: rec.knot_name.clone(), short_slopes: short.len(), rows })
}

/// Audits every record, sorted by knot name.
pub fn audit_records(records: &[CuspRecord], cfg: &AuditConfig, exec: Exec) -> Vec<Result<AuditReport>> {
    let mut recs: Vec<&CuspRecord> = records.iter().collect();
    recs.sort_by(|a, b| a.knot_name.cmp(&b.knot_name));
    map_collect(exec, recs, |r| audit_knot(r, cfg))
}
