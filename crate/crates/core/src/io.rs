//! File formats: potential JSON, classification reports, and profile CSV
//! with a JSON metadata sidecar.
//!
//! Profile CSV: header `t,u,dudt,singular`, one row per sample, fixed
//! 17-significant-digit scientific notation (round-trip exact for f64).
//! The `singular` column is empty for ordinary rows and one of
//! `peak | cusp | c1 | plateau-edge` on the rows sitting exactly at
//! singular points; those rows carry `dudt = 0` by convention since the
//! derivative is not defined there.

use crate::classify::{Attributes, WaveClass, WaveTag};
use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::profile::{Sample, SingKind, TailReport, WaveProfile};
use serde::{Deserialize, Serialize};
use std::path::Path;

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

// ---------------------------------------------------------------------------
// Potential JSON: {"coeffs": [c0, c1, ...]}, exact decimal strings accepted
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct PotentialJson {
    pub coeffs: Vec<Coeff>,
}

/// A coefficient given either as a JSON number or as a decimal string.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Num(f64),
    Str(String),
}

impl Coeff {
    fn value(&self) -> Result<f64> {
        match self {
            Coeff::Num(x) => Ok(*x),
            Coeff::Str(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad coefficient {s:?}: {e}"))),
        }
    }
}

pub fn potential_to_json(f: &Potential) -> serde_json::Value {
    serde_json::json!({ "coeffs": f.coeffs() })
}

pub fn potential_from_json(v: &serde_json::Value) -> Result<Potential> {
    let pj: PotentialJson = serde_json::from_value(v.clone())
        .map_err(|e| Error::Config(format!("bad potential JSON: {e}")))?;
    let coeffs = pj
        .coeffs
        .iter()
        .map(Coeff::value)
        .collect::<Result<Vec<f64>>>()?;
    Potential::new(coeffs)
}

// ---------------------------------------------------------------------------
// Classification report JSON
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttributesJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crest: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trough: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptote: Option<f64>,
}

impl From<&Attributes> for AttributesJson {
    fn from(a: &Attributes) -> Self {
        AttributesJson {
            period: a.period,
            support: a.support,
            peak_slope: a.peak_slope,
            crest: a.crest,
            trough: a.trough,
            asymptote: a.asymptote,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassJson {
    pub tag: String,
    pub interval: [f64; 2],
    pub attributes: AttributesJson,
}

impl From<&WaveClass> for ClassJson {
    fn from(c: &WaveClass) -> Self {
        ClassJson {
            tag: c.tag.as_str().to_string(),
            interval: [c.interval.left_end, c.interval.right_end],
            attributes: (&c.attributes).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub h: f64,
    pub classes: Vec<ClassJson>,
}

impl ClassifyReport {
    pub fn new(h: f64, classes: &[WaveClass]) -> Self {
        ClassifyReport {
            h,
            classes: classes.iter().map(ClassJson::from).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Profile CSV + sidecar
// ---------------------------------------------------------------------------

pub fn profile_csv_string(p: &WaveProfile) -> String {
    let mut out = String::with_capacity(64 * (p.samples.len() + 1));
    out.push_str("t,u,dudt,singular\n");
    let eps = 1e-13 * (p.t_max() - p.t_min()).abs().max(1.0);
    for s in &p.samples {
        let mark = p
            .singular_set
            .iter()
            .find(|(tk, _)| (s.t - tk).abs() <= eps)
            .map(|(_, k)| k.as_str())
            .unwrap_or("");
        out.push_str(&fmt17(s.t));
        out.push(',');
        out.push_str(&fmt17(s.u));
        out.push(',');
        out.push_str(&fmt17(s.dudt));
        out.push(',');
        out.push_str(mark);
        out.push('\n');
    }
    out
}

pub fn write_profile_csv(p: &WaveProfile, path: &Path) -> Result<()> {
    std::fs::write(path, profile_csv_string(p))?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SingularJson {
    pub t: f64,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_slope: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TruncationJson {
    pub t_trunc: f64,
    pub u_trunc: f64,
    pub decay_rate: f64,
}

/// Metadata sidecar carrying everything verification needs besides the
/// samples: the potential, the energy level, the class, and the truncation
/// report.
#[derive(Debug, Serialize, Deserialize)]
pub struct Sidecar {
    pub potential: serde_json::Value,
    pub energy: f64,
    pub tag: String,
    pub attributes: AttributesJson,
    pub interval: [f64; 2],
    pub singular: Vec<SingularJson>,
    /// Time intervals of the sqrt(u) refinement bands next to cusps.
    #[serde(default)]
    pub bands: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationJson>,
}

pub fn sidecar_for(p: &WaveProfile, f: &Potential) -> Sidecar {
    Sidecar {
        potential: potential_to_json(f),
        energy: p.energy,
        tag: p.meta.tag.as_str().to_string(),
        attributes: (&p.meta.attributes).into(),
        interval: [p.meta.interval.left_end, p.meta.interval.right_end],
        singular: p
            .singular_set
            .iter()
            .map(|(t, k)| SingularJson {
                t: *t,
                kind: k.as_str().to_string(),
                peak_slope: match k {
                    SingKind::Peak(a) => Some(*a),
                    _ => None,
                },
            })
            .collect(),
        bands: p.bands.clone(),
        truncation: p.truncation.map(|t| TruncationJson {
            t_trunc: t.t_trunc,
            u_trunc: t.u_trunc,
            decay_rate: t.decay_rate,
        }),
    }
}

pub fn write_profile_with_sidecar(
    p: &WaveProfile,
    f: &Potential,
    csv_path: &Path,
    sidecar_path: &Path,
) -> Result<()> {
    write_profile_csv(p, csv_path)?;
    let sc = sidecar_for(p, f);
    let text = serde_json::to_string_pretty(&sc)
        .map_err(|e| Error::Io(format!("sidecar serialization: {e}")))?;
    std::fs::write(sidecar_path, text)?;
    Ok(())
}

fn parse_csv(text: &str) -> Result<Vec<(Sample, String)>> {
    let mut rows = Vec::new();
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "t,u,dudt,singular" => {}
        other => {
            return Err(Error::Io(format!(
                "bad profile CSV header: {:?}",
                other.unwrap_or("")
            )))
        }
    }
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Io(format!("row {}: expected 4 columns", i + 2)));
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Io(format!("row {}: bad {what}: {e}", i + 2)))
        };
        rows.push((
            Sample {
                t: parse(cols[0], "t")?,
                u: parse(cols[1], "u")?,
                dudt: parse(cols[2], "dudt")?,
            },
            cols[3].trim().to_string(),
        ));
    }
    Ok(rows)
}

/// Reloads a profile from its CSV and sidecar. The wave class is
/// reconstructed by re-running the classifier on the stored potential and
/// level, so a reloaded profile verifies exactly like the in-memory one.
pub fn load_profile(csv_path: &Path, sidecar_path: &Path) -> Result<(WaveProfile, Potential)> {
    let sc: Sidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path)?)
        .map_err(|e| Error::Io(format!("sidecar parse: {e}")))?;
    let f = potential_from_json(&sc.potential)?;
    let rows = parse_csv(&std::fs::read_to_string(csv_path)?)?;

    let samples: Vec<Sample> = rows.iter().map(|(s, _)| *s).collect();
    let mut singular = Vec::new();
    for (s, mark) in &rows {
        if mark.is_empty() {
            continue;
        }
        let kind = match mark.as_str() {
            "peak" => {
                let a = sc
                    .singular
                    .iter()
                    .find(|sj| (sj.t - s.t).abs() <= 1e-12 * s.t.abs().max(1.0))
                    .and_then(|sj| sj.peak_slope)
                    .unwrap_or(0.0);
                SingKind::Peak(a)
            }
            "cusp" => SingKind::Cusp,
            "c1" => SingKind::C1Contact,
            "plateau-edge" => SingKind::PlateauEdge,
            other => return Err(Error::Io(format!("unknown singular kind {other:?}"))),
        };
        singular.push((s.t, kind));
    }

    let tag = WaveTag::parse(&sc.tag)
        .ok_or_else(|| Error::Io(format!("unknown wave tag {:?}", sc.tag)))?;
    let meta = crate::classify::classify_level(&f, sc.energy)
        .into_iter()
        .find(|c| c.tag == tag)
        .ok_or_else(|| {
            Error::Io(format!(
                "sidecar tag {} not admitted by the stored potential at h = {}",
                sc.tag, sc.energy
            ))
        })?;

    let profile = WaveProfile {
        samples,
        singular_set: singular,
        bands: sc.bands,
        meta,
        energy: sc.energy,
        truncation: sc.truncation.map(|t| TailReport {
            t_trunc: t.t_trunc,
            u_trunc: t.u_trunc,
            decay_rate: t.decay_rate,
        }),
    };
    Ok((profile, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{build_compacton, BuildOptions};

    #[test]
    fn potential_json_round_trip_and_decimal_strings() {
        let f = Potential::new(vec![0.0, -1.0, 1.0]).unwrap();
        let v = potential_to_json(&f);
        let g = potential_from_json(&v).unwrap();
        assert_eq!(f.coeffs(), g.coeffs());

        let v: serde_json::Value =
            serde_json::from_str(r#"{"coeffs": ["0", "-0.5", 1.0, "-0.5"]}"#).unwrap();
        let g = potential_from_json(&v).unwrap();
        assert_eq!(g.coeffs(), &[0.0, -0.5, 1.0, -0.5]);
    }

    #[test]
    fn profile_csv_round_trip_is_exact() {
        let f = Potential::new(vec![0.0, 0.0, -1.0, 1.0]).unwrap();
        let p = build_compacton(&f, &BuildOptions::default()).unwrap();
        let dir = std::env::temp_dir().join("travwave-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let csv = dir.join("compacton.csv");
        let sc = dir.join("compacton.json");
        write_profile_with_sidecar(&p, &f, &csv, &sc).unwrap();
        let (q, g) = load_profile(&csv, &sc).unwrap();
        assert_eq!(f.coeffs(), g.coeffs());
        assert_eq!(p.samples.len(), q.samples.len());
        for (a, b) in p.samples.iter().zip(q.samples.iter()) {
            assert_eq!(a.t, b.t);
            assert_eq!(a.u, b.u);
            assert_eq!(a.dudt, b.dudt);
        }
        assert_eq!(p.singular_set.len(), q.singular_set.len());
        assert_eq!(p.meta.tag, q.meta.tag);
    }
}
