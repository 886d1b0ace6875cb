mod common;

use std::io::Write;

use common::*;
use fdh_core::io::{
    build_report, dataset_digest, read_csv, write_csv, write_report, write_response_csv, ReportHeader,
};
use fdh_core::{build_response, classify_all, FdhError, Tolerance};

fn temp_csv(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn reads_example_file() {
    let f = temp_csv("dmu,in_x,out_y\nA,1,2\nB,3,4\nC,5,5\nD,6,13\n");
    assert_eq!(read_csv(f.path()).unwrap(), four_units());
}

#[test]
fn missing_file_is_io_error() {
    let err = read_csv("/nonexistent/data.csv").unwrap_err();
    assert!(matches!(err, FdhError::Io(_)));
    assert!(!err.is_data_error());
}

#[test]
fn header_only_file_is_empty() {
    let f = temp_csv("dmu,in_x,out_y\n");
    assert!(matches!(read_csv(f.path()), Err(FdhError::EmptyDataset)));
}

#[test]
fn duplicate_names_rejected() {
    let f = temp_csv("dmu,in_x,out_y\nA,1,2\nA,2,3\n");
    assert!(matches!(read_csv(f.path()), Err(FdhError::DuplicateName(_))));
}

#[test]
fn file_round_trip_with_fractions() {
    let d = read_csv(temp_csv("dmu,in_x,out_y,out_z\nP,1/3,13/4,0.125\nQ,2,7/9,5\n").path()).unwrap();
    let mut out = tempfile::NamedTempFile::new().unwrap();
    write_csv(&d, &mut out).unwrap();
    let back = read_csv(out.path()).unwrap();
    assert_eq!(back, d);
    assert_eq!(dataset_digest(&back), dataset_digest(&d));
}

#[test]
fn report_document_shape() {
    let exact = four_units();
    let d = exact.to_f64();
    let tol = Tolerance::default();
    let doc = build_report(ReportHeader::new(&exact, tol, false, false), &d, &classify_all(&d, tol), &[]);
    let mut buf = Vec::new();
    write_report(&doc, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.ends_with('\n'));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["header"]["tool"], "fdh");
    assert_eq!(v["header"]["units"], 4);
    let units = v["units"].as_array().unwrap();
    assert_eq!(units[0]["sigma_minus"], "inf");
    assert_eq!(units[1]["sigma_plus"], 2.25);
    assert_eq!(units[1]["witnesses"]["theta"]["ndrs"], "A");
    assert_eq!(units[3]["grs"], "G-CRS");
    assert_eq!(units[3]["mpss"], true);
    // Field order in the text itself, for the first record.
    let first = &text[text.find("\"units\":[").unwrap()..];
    let order = [
        "name", "efficient", "projected", "theta", "phi", "mpss", "grs", "right_rts", "left_rts",
        "sigma_plus", "sigma_minus", "witnesses", "dominated_by", "error",
    ];
    let positions: Vec<usize> = order
        .iter()
        .map(|k| first.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
}

#[test]
fn response_csv_float_values() {
    let d = four_units().to_f64();
    let r = build_response(&d, B).unwrap();
    let mut buf = Vec::new();
    write_response_csv(&r, None, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(
        text,
        "alpha_threshold,beta_value\n0.333333333333,0.5\n1,1\n1.666666666667,1.25\n2,3.25\n"
    );
}
