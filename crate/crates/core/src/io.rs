//! CSV ingestion and JSON/CSV report emission.
//!
//! Input files have a header `dmu,in_<name>...,out_<name>...`; values may be
//! decimals or fractions (`13/4`) and are read exactly.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{FdhError, Result};
use crate::model::{Dataset, Delta, Orientation, RatioTable};
use crate::response::{build_response, one_sided_step_derivatives, ResponseFunction, StepSlope};
use crate::rts::UnitOutcome;
use crate::scale::{decremental_set, incremental_set, ratios_from_table};
use crate::technology::dominating_unit;
use crate::scalar::{format_rational, parse_rational, Extended, Rational, Scalar, Tolerance};

pub const TOOL_NAME: &str = "fdh";

pub fn read_csv(path: impl AsRef<Path>) -> Result<Dataset<Rational>> {
    read_csv_from(File::open(path)?)
}

pub fn read_csv_str(text: &str) -> Result<Dataset<Rational>> {
    read_csv_from(text.as_bytes())
}

pub fn read_csv_from<R: Read>(reader: R) -> Result<Dataset<Rational>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(FdhError::EmptyDataset),
    };
    let mut in_cols = Vec::new();
    let mut out_cols = Vec::new();
    for (col, name) in header.iter().enumerate().skip(1) {
        if name.strip_prefix("in_").is_some_and(|n| !n.is_empty()) {
            in_cols.push(col);
        } else if name.strip_prefix("out_").is_some_and(|n| !n.is_empty()) {
            out_cols.push(col);
        } else {
            return Err(FdhError::Parse {
                row: 1,
                col: col + 1,
                msg: format!("column `{name}` is neither `in_<name>` nor `out_<name>`"),
            });
        }
    }
    if in_cols.is_empty() {
        return Err(FdhError::NoInputColumns);
    }
    if out_cols.is_empty() {
        return Err(FdhError::NoOutputColumns);
    }

    let mut names = Vec::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (idx, rec) in records.enumerate() {
        let rec = rec?;
        let row = idx + 2;
        if rec.len() != header.len() {
            return Err(FdhError::RaggedRows {
                row,
                expected: header.len(),
                found: rec.len(),
            });
        }
        let cell = |col: usize| {
            parse_rational(&rec[col]).map_err(|msg| FdhError::Parse {
                row,
                col: col + 1,
                msg,
            })
        };
        names.push(rec[0].to_string());
        inputs.push(in_cols.iter().map(|&c| cell(c)).collect::<Result<Vec<_>>>()?);
        outputs.push(out_cols.iter().map(|&c| cell(c)).collect::<Result<Vec<_>>>()?);
    }
    Dataset::new(names, inputs, outputs)
}

/// Writes `d` with fraction literals, so reading it back is lossless.
/// Columns are named `in_1..`, `out_1..`.
pub fn write_csv<W: Write>(d: &Dataset<Rational>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["dmu".to_string()];
    header.extend((1..=d.num_inputs()).map(|i| format!("in_{i}")));
    header.extend((1..=d.num_outputs()).map(|r| format!("out_{r}")));
    w.write_record(&header)?;
    for j in 0..d.len() {
        let mut row = vec![d.name(j).to_string()];
        row.extend(d.input(j).iter().chain(d.output(j)).map(format_rational));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// SHA-256 over a canonical rendering of the data (names and exact values).
pub fn dataset_digest(d: &Dataset<Rational>) -> String {
    let mut h = Sha256::new();
    h.update(format!("{} {} {}\n", d.len(), d.num_inputs(), d.num_outputs()));
    for j in 0..d.len() {
        h.update(d.name(j).as_bytes());
        for v in d.input(j).iter().chain(d.output(j)) {
            h.update(b",");
            h.update(format_rational(v).as_bytes());
        }
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// A score rendered with at most 12 decimals; integral values print without
/// a fractional part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Num {
    fn rounded(self) -> f64 {
        let r = (self.0 * 1e12).round() / 1e12;
        if r.is_finite() {
            r
        } else {
            self.0
        }
    }
}

impl Serialize for Num {
    fn serialize<Z: Serializer>(&self, ser: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let r = self.rounded();
        if r.fract() == 0.0 && r.abs() < 9.0e15 {
            ser.serialize_i64(r as i64)
        } else {
            ser.serialize_f64(r)
        }
    }
}

/// `sigma_minus`: a number, or the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtNum {
    Finite(Num),
    Infinite,
}

impl Serialize for ExtNum {
    fn serialize<Z: Serializer>(&self, ser: Z) -> std::result::Result<Z::Ok, Z::Error> {
        match self {
            ExtNum::Finite(n) => n.serialize(ser),
            ExtNum::Infinite => ser.serialize_str("inf"),
        }
    }
}

impl<S: Scalar> From<&Extended<S>> for ExtNum {
    fn from(e: &Extended<S>) -> Self {
        match e {
            Extended::Finite(v) => ExtNum::Finite(Num(v.to_f64())),
            Extended::Infinite => ExtNum::Infinite,
        }
    }
}

/// One value per technology, in the fixed order vrs, crs, nirs, ndrs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerDelta<T> {
    pub vrs: T,
    pub crs: T,
    pub nirs: T,
    pub ndrs: T,
}

impl<T> PerDelta<T> {
    fn from_fn(mut f: impl FnMut(Delta) -> T) -> Self {
        PerDelta {
            vrs: f(Delta::Vrs),
            crs: f(Delta::Crs),
            nirs: f(Delta::Nirs),
            ndrs: f(Delta::Ndrs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    pub dataset_sha256: String,
    pub tolerance: f64,
    /// `"exact"` or `"float"`.
    pub arithmetic: String,
    /// Inefficient units were replaced by their output-oriented VRS
    /// projections before classification.
    pub projected: bool,
    pub units: usize,
    pub inputs: usize,
    pub outputs: usize,
}

impl ReportHeader {
    pub fn new(d: &Dataset<Rational>, tol: Tolerance, exact: bool, projected: bool) -> Self {
        ReportHeader {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            dataset_sha256: dataset_digest(d),
            tolerance: tol.eps(),
            arithmetic: if exact { "exact" } else { "float" }.to_string(),
            projected,
            units: d.len(),
            inputs: d.num_inputs(),
            outputs: d.num_outputs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witnesses {
    pub theta: PerDelta<String>,
    pub phi: PerDelta<String>,
    pub sigma_plus: Option<String>,
    pub sigma_minus: Option<String>,
}

/// Per-unit record. Classification fields are `null` for inefficient units.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitRecord {
    pub name: String,
    pub efficient: bool,
    pub projected: bool,
    pub theta: PerDelta<Num>,
    pub phi: PerDelta<Num>,
    pub mpss: Option<bool>,
    pub grs: Option<String>,
    pub right_rts: Option<String>,
    pub left_rts: Option<String>,
    pub sigma_plus: Option<Num>,
    pub sigma_minus: Option<ExtNum>,
    pub witnesses: Witnesses,
    pub dominated_by: Option<String>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub header: ReportHeader,
    pub units: Vec<UnitRecord>,
}

/// Assembles the report in input order. `projected[j]` marks units whose
/// outputs were replaced before the analysis.
pub fn build_report<S: Scalar>(
    header: ReportHeader,
    d: &Dataset<S>,
    outcomes: &[UnitOutcome<S>],
    projected: &[bool],
) -> ReportDocument {
    let name = |j: usize| d.name(j).to_string();
    let units = outcomes
        .iter()
        .map(|out| {
            let o = out.unit();
            let scores = match out {
                UnitOutcome::Efficient(r) => Some(&r.scores),
                UnitOutcome::Inefficient { scores, .. } => Some(scores),
                UnitOutcome::Failed { .. } => None,
            };
            let scores = scores
                .cloned()
                .unwrap_or_else(|| crate::efficiency::scores(d, o).expect("valid index"));
            let theta = PerDelta::from_fn(|delta| Num(scores.theta(delta).to_f64()));
            let phi = PerDelta::from_fn(|delta| Num(scores.phi(delta).to_f64()));
            let report = out.report();
            UnitRecord {
                name: name(o),
                efficient: !matches!(out, UnitOutcome::Inefficient { .. }),
                projected: projected.get(o).copied().unwrap_or(false),
                theta,
                phi,
                mpss: report.map(|r| r.mpss),
                grs: report.map(|r| r.grs.label().to_string()),
                right_rts: report.map(|r| r.one_sided.right.label().to_string()),
                left_rts: report.map(|r| r.one_sided.left.label().to_string()),
                sigma_plus: report.map(|r| Num(r.sigma.sigma_plus.to_f64())),
                sigma_minus: report.map(|r| ExtNum::from(&r.sigma.sigma_minus)),
                witnesses: Witnesses {
                    theta: PerDelta::from_fn(|delta| name(scores.theta[delta.index()].witness)),
                    phi: PerDelta::from_fn(|delta| name(scores.phi[delta.index()].witness)),
                    sigma_plus: report.and_then(|r| r.sigma.plus_witness).map(name),
                    sigma_minus: report.and_then(|r| r.sigma.minus_witness).map(name),
                },
                dominated_by: match out {
                    UnitOutcome::Inefficient { dominated_by, .. } => Some(name(*dominated_by)),
                    _ => None,
                },
                error: match out {
                    UnitOutcome::Failed { error, .. } => Some(error.clone()),
                    _ => None,
                },
            }
        })
        .collect();
    ReportDocument { header, units }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EfficiencyRecord {
    pub name: String,
    pub score: Num,
    pub witness: String,
    pub delta: Num,
}

/// Scores of every unit under one technology and orientation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EfficiencyDocument {
    pub header: ReportHeader,
    pub technology: Delta,
    pub orientation: Orientation,
    pub units: Vec<EfficiencyRecord>,
}

pub fn build_efficiency<S: Scalar>(
    header: ReportHeader,
    d: &Dataset<S>,
    delta: Delta,
    orientation: Orientation,
) -> Result<EfficiencyDocument> {
    let units = (0..d.len())
        .map(|o| {
            let s = match orientation {
                Orientation::Input => crate::efficiency::theta(d, delta, o)?,
                Orientation::Output => crate::efficiency::phi(d, delta, o)?,
            };
            Ok(EfficiencyRecord {
                name: d.name(o).to_string(),
                score: Num(s.value.to_f64()),
                witness: d.name(s.witness).to_string(),
                delta: Num(s.delta.to_f64()),
            })
        })
        .collect::<Result<_>>()?;
    Ok(EfficiencyDocument {
        header,
        technology: delta,
        orientation,
        units,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub name: String,
    pub alpha: Num,
    pub beta: Num,
    pub incremental: bool,
    pub decremental: bool,
}

/// Ratio table of one unit with its scale ratios.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatiosDocument {
    pub header: ReportHeader,
    pub dmu: String,
    pub efficient: bool,
    pub rows: Vec<RatioRow>,
    pub sigma_plus: Option<Num>,
    pub sigma_minus: Option<ExtNum>,
    pub sigma_plus_witness: Option<String>,
    pub sigma_minus_witness: Option<String>,
    pub dominated_by: Option<String>,
}

pub fn build_ratios<S: Scalar>(
    header: ReportHeader,
    d: &Dataset<S>,
    o: usize,
    tol: Tolerance,
) -> Result<RatiosDocument> {
    let table = RatioTable::new(d, o)?;
    let inc = incremental_set(&table, tol);
    let dec = decremental_set(&table, tol);
    let rows = table
        .pairs()
        .map(|(j, a, b)| RatioRow {
            name: d.name(j).to_string(),
            alpha: Num(a.to_f64()),
            beta: Num(b.to_f64()),
            incremental: inc.contains(&j),
            decremental: dec.contains(&j),
        })
        .collect();
    let dominated_by = dominating_unit(d, o);
    let sigma = dominated_by.is_none().then(|| ratios_from_table(&table, tol));
    let name = |j: usize| d.name(j).to_string();
    Ok(RatiosDocument {
        header,
        dmu: name(o),
        efficient: dominated_by.is_none(),
        rows,
        sigma_plus: sigma.as_ref().map(|s| Num(s.sigma_plus.to_f64())),
        sigma_minus: sigma.as_ref().map(|s| ExtNum::from(&s.sigma_minus)),
        sigma_plus_witness: sigma.as_ref().and_then(|s| s.plus_witness).map(name),
        sigma_minus_witness: sigma.as_ref().and_then(|s| s.minus_witness).map(name),
        dominated_by: dominated_by.map(name),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub alpha_threshold: Num,
    pub beta_value: Num,
}

/// Steps of one unit's response function and its one-sided step
/// derivatives at 1 (`"0"`, `"inf"`, or `null` when undefined).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResponseRecord {
    pub dmu: String,
    pub efficient: bool,
    pub alpha_min: Num,
    pub steps: Vec<StepRecord>,
    pub right_derivative: Option<String>,
    pub left_derivative: Option<String>,
}

pub fn build_response_record<S: Scalar>(
    d: &Dataset<S>,
    o: usize,
    alpha_max: Option<&S>,
) -> Result<ResponseRecord> {
    let r = build_response(d, o)?;
    let slope = |s: StepSlope| match s {
        StepSlope::Zero => "0".to_string(),
        StepSlope::Infinite => "inf".to_string(),
    };
    let der = one_sided_step_derivatives(d, &r).ok();
    let steps = r
        .steps()
        .iter()
        .take_while(|s| alpha_max.is_none_or(|m| s.threshold <= *m))
        .map(|s| StepRecord {
            alpha_threshold: Num(s.threshold.to_f64()),
            beta_value: Num(s.value.to_f64()),
        })
        .collect();
    Ok(ResponseRecord {
        dmu: d.name(o).to_string(),
        efficient: der.is_some(),
        alpha_min: Num(r.alpha_min().to_f64()),
        steps,
        right_derivative: der.map(|x| slope(x.right)),
        left_derivative: der.and_then(|x| x.left).map(slope),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResponseDocument {
    pub header: ReportHeader,
    #[serde(flatten)]
    pub response: ResponseRecord,
}

/// Per-unit records plus the response function of every unit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FullReport {
    pub header: ReportHeader,
    pub units: Vec<UnitRecord>,
    pub responses: Vec<ResponseRecord>,
}

/// Compact JSON followed by a newline.
pub fn write_report<W: Write, T: Serialize>(doc: &T, mut writer: W) -> Result<()> {
    serde_json::to_writer(&mut writer, doc)?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

/// Writes to `path`, or stdout when `None`.
pub fn write_report_to<T: Serialize>(doc: &T, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_report(doc, io::BufWriter::new(File::create(p)?)),
        None => write_report(doc, io::stdout().lock()),
    }
}

/// Two-column `alpha_threshold,beta_value` listing of the steps, keeping
/// thresholds up to `alpha_max` when given.
pub fn write_response_csv<S: Scalar, W: Write>(
    r: &ResponseFunction<S>,
    alpha_max: Option<&S>,
    writer: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["alpha_threshold", "beta_value"])?;
    for step in r.steps() {
        if alpha_max.is_some_and(|m| step.threshold > *m) {
            break;
        }
        w.write_record([
            format_value(&step.threshold),
            format_value(&step.value),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Text for a scalar as it appears in CSV output: exact fraction for
/// rationals, 12-decimal rounding for floats.
pub fn format_value<S: Scalar>(v: &S) -> String {
    match v.to_exact() {
        Some(r) => format_rational(&r),
        None => serde_json::to_string(&Num(v.to_f64())).expect("finite"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::*;
    use crate::rts::classify_all;

    const EXAMPLE1: &str = "dmu,in_x,out_y\nA,1,2\nB,3,4\nC,5,5\nD,6,13\n";

    #[test]
    fn reads_four_units() {
        assert_eq!(read_csv_str(EXAMPLE1).unwrap(), four_units());
    }

    #[test]
    fn header_errors() {
        assert!(matches!(read_csv_str("dmu,in_x\nA,1\n"), Err(FdhError::NoOutputColumns)));
        assert!(matches!(read_csv_str("dmu,out_y\nA,1\n"), Err(FdhError::NoInputColumns)));
        assert!(matches!(
            read_csv_str("dmu,in_x,weight\nA,1,2\n"),
            Err(FdhError::Parse { row: 1, col: 3, .. })
        ));
    }

    #[test]
    fn cell_errors_report_position() {
        let err = read_csv_str("dmu,in_x,out_y\nA,1,2\nB,x,4\n").unwrap_err();
        assert!(matches!(err, FdhError::Parse { row: 3, col: 2, .. }), "{err}");
        let err = read_csv_str("dmu,in_x,out_y\nA,1\n").unwrap_err();
        assert!(matches!(err, FdhError::RaggedRows { row: 2, .. }), "{err}");
        let err = read_csv_str("dmu,in_x,out_y\nA,0,2\n").unwrap_err();
        assert!(matches!(err, FdhError::NonPositiveValue { .. }), "{err}");
    }

    #[test]
    fn fraction_literals() {
        let d = read_csv_str("dmu,in_x,out_y\nA,1,13/4\n").unwrap();
        assert_eq!(d.output(0)[0], q(13, 4));
        assert_eq!(d.to_f64().output(0)[0], 3.25);
    }

    #[test]
    fn interleaved_columns_keep_order() {
        let d = read_csv_str("dmu,out_a,in_b,out_c,in_d\nA,1,2,3,4\n").unwrap();
        assert_eq!(d.input(0), &[q(2, 1), q(4, 1)]);
        assert_eq!(d.output(0), &[q(1, 1), q(3, 1)]);
    }

    #[test]
    fn csv_round_trip() {
        let d = single_io(&[("A", 1, 2), ("B", 3, 4)]).map_scalar(|v| v / q(3, 1));
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        assert_eq!(read_csv_from(buf.as_slice()).unwrap(), d);
    }

    #[test]
    fn number_formatting() {
        let s = |x: f64| serde_json::to_string(&Num(x)).unwrap();
        assert_eq!(s(0.0), "0");
        assert_eq!(s(1.0), "1");
        assert_eq!(s(66.0 / 65.0), "1.015384615385");
        assert_eq!(s(2.25), "2.25");
        assert_eq!(s(1.1), "1.1");
        assert_eq!(serde_json::to_string(&ExtNum::Infinite).unwrap(), "\"inf\"");
    }

    #[test]
    fn four_units_record_for_d() {
        let exact = four_units();
        let d = exact.to_f64();
        let tol = Tolerance::default();
        let header = ReportHeader::new(&exact, tol, false, false);
        let doc = build_report(header, &d, &classify_all(&d, tol), &[]);
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains(
            r#""grs":"G-CRS","right_rts":"Right-DRS","left_rts":"Left-IRS","sigma_plus":0,"sigma_minus":1.015384615385"#
        ));
    }

    #[test]
    fn inefficient_record() {
        let exact = single_io(&[("B", 3, 4), ("E", 4, 4)]);
        let tol = Tolerance::default();
        let header = ReportHeader::new(&exact, tol, true, false);
        let doc = build_report(header, &exact, &classify_all(&exact, tol), &[]);
        let e = &doc.units[1];
        assert!(!e.efficient);
        assert_eq!(e.dominated_by.as_deref(), Some("B"));
        assert_eq!(e.theta.vrs, Num(0.75));
        assert_eq!(e.grs, None);
        let json = serde_json::to_value(e).unwrap();
        assert!(json["right_rts"].is_null());
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = dataset_digest(&four_units());
        assert_eq!(a, dataset_digest(&four_units()));
        assert_eq!(a.len(), 64);
        assert_ne!(a, dataset_digest(&single_io(&[("A", 1, 2)])));
    }

    #[test]
    fn response_csv() {
        let d = four_units();
        let r = crate::response::build_response(&d, B).unwrap();
        let mut buf = Vec::new();
        write_response_csv(&r, Some(&q(5, 3)), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "alpha_threshold,beta_value\n1/3,1/2\n1,1\n5/3,5/4\n"
        );
    }

    #[test]
    fn ratios_document_for_b() {
        let d = four_units();
        let tol = Tolerance::default();
        let doc = build_ratios(ReportHeader::new(&d, tol, true, false), &d, B, tol).unwrap();
        assert!(doc.efficient);
        assert_eq!(doc.rows[D].alpha, Num(2.0));
        assert_eq!(doc.rows[D].beta, Num(3.25));
        assert!(doc.rows[D].incremental && doc.rows[A].decremental);
        assert!(!doc.rows[B].incremental && !doc.rows[B].decremental);
        assert_eq!(doc.sigma_plus, Some(Num(2.25)));
        assert_eq!(doc.sigma_minus_witness.as_deref(), Some("A"));
    }

    #[test]
    fn response_record_for_b_and_inefficient_unit() {
        let d = four_units();
        let r = build_response_record(&d, B, Some(&q(1, 1))).unwrap();
        assert_eq!(r.steps.len(), 2);
        assert_eq!(r.right_derivative.as_deref(), Some("0"));
        assert_eq!(r.left_derivative.as_deref(), Some("inf"));
        let e = single_io(&[("B", 3, 4), ("E", 4, 4)]);
        let r = build_response_record(&e, 1, None).unwrap();
        assert!(!r.efficient);
        assert_eq!(r.right_derivative, None);
    }
}
