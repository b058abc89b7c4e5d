//! The dataset wire format.
//!
//! ```text
//! # label: q1
//! t,shots,ones
//! 0,8192,3
//! 0.1,8192,27
//! ```
//!
//! The label line is optional; other lines starting with `#` are ignored. Times are
//! written in the shortest form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::simulate::{Dataset, ShotRecord};

pub const HEADER: &str = "t,shots,ones";
const LABEL_PREFIX: &str = "# label:";

/// Parses a dataset. `fallback_label` is used when the text has no label line.
pub fn parse_csv(text: &str, fallback_label: &str) -> Result<Dataset> {
    let mut label = None;
    let mut header_seen = false;
    let mut records: Vec<ShotRecord> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix(LABEL_PREFIX) {
            if label.is_none() && !header_seen {
                label = Some(rest.trim().to_string());
            }
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line.trim() != HEADER {
                return Err(err(format!("expected header '{HEADER}', found '{line}'")));
            }
            header_seen = true;
            continue;
        }

        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        }
        let t: f64 = fields[0]
            .parse()
            .map_err(|_| err(format!("time '{}' is not a number", fields[0])))?;
        if !t.is_finite() {
            return Err(err(format!("time '{}' is not finite", fields[0])));
        }
        let shots: u64 = fields[1].parse().map_err(|_| {
            err(format!(
                "shots '{}' is not a non-negative integer",
                fields[1]
            ))
        })?;
        let ones: u64 = fields[2].parse().map_err(|_| {
            err(format!(
                "ones '{}' is not a non-negative integer",
                fields[2]
            ))
        })?;
        if shots == 0 {
            return Err(err("shots must be >= 1".into()));
        }
        if ones > shots {
            return Err(err(format!("ones ({ones}) > shots ({shots})")));
        }
        if let Some(prev) = records.last() {
            if t <= prev.t {
                return Err(err(format!("non-increasing time: {t} after {}", prev.t)));
            }
        }
        records.push(ShotRecord { t, shots, ones });
    }

    if !header_seen {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("missing header '{HEADER}'"),
        });
    }
    let label = label.unwrap_or_else(|| fallback_label.to_string());
    Dataset::new(records, label).map_err(|e| Error::Parse {
        line: text.lines().count(),
        message: e.to_string(),
    })
}

pub fn write_csv(ds: &Dataset) -> String {
    let mut out = String::new();
    if !ds.label().is_empty() {
        let label = ds.label().replace(['\n', '\r'], " ");
        let _ = writeln!(out, "{LABEL_PREFIX} {label}");
    }
    out.push_str(HEADER);
    out.push('\n');
    for r in ds.records() {
        let _ = writeln!(out, "{},{},{}", r.t, r.shots, r.ones);
    }
    out
}

/// Reads a dataset file, labelling it by file stem when the file has no label line.
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_csv(&text, &stem).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NoiseModel;
    use crate::simulate::{sample_dataset, TimeGrid};
    use proptest::prelude::*;

    #[test]
    fn single_row() {
        let ds = parse_csv("t,shots,ones\n0.0,8192,12\n", "file").unwrap_err();
        // one record is not a dataset
        assert!(matches!(ds, Error::Parse { .. }));

        let ds = parse_csv("t,shots,ones\n0.0,8192,12\n0.1,8192,40\n", "file").unwrap();
        assert_eq!(
            ds.records()[0],
            ShotRecord {
                t: 0.0,
                shots: 8192,
                ones: 12
            }
        );
        assert_eq!(ds.label(), "file");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_csv("t,shots,ones\n0.0,8192,12\n0.1,8192,9000\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");

        let e = parse_csv("t,shots,ones\n0.2,8192,12\n0.1,8192,90\n", "f").unwrap_err();
        match e {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("non-increasing"));
            }
            other => panic!("{other:?}"),
        }

        let e = parse_csv("time,n,k\n0,1,0\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));

        let e = parse_csv("t,shots,ones\n0,abc,1\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));

        let e = parse_csv("t,shots,ones\n0,10\n", "f").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn label_line() {
        let ds = parse_csv("# label: q1\nt,shots,ones\n0,10,1\n1,10,2\n", "file").unwrap();
        assert_eq!(ds.label(), "q1");
        let text = write_csv(&ds);
        assert!(text.starts_with("# label: q1\nt,shots,ones\n"));
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn default_grid_times_are_short() {
        let ds = sample_dataset(&NoiseModel::ideal(), &TimeGrid::default(), 8192, 0).unwrap();
        let text = write_csv(&ds);
        assert!(text.lines().any(|l| l.starts_with("6.3,")));
        assert_eq!(text.lines().count(), 64 + 2);
    }

    proptest! {
        #[test]
        fn round_trip(
            alpha in 0.5..1.0f64,
            phi0 in -0.5..0.5f64,
            c in 0.5..2.0f64,
            shots in 1u64..100_000,
            seed in any::<u64>(),
            step in 0.001..0.5f64,
            label in "[a-z0-9_]{0,8}",
        ) {
            let model = NoiseModel::new(alpha, (1.0 - alpha) / 2.0, phi0, c).unwrap();
            let grid = TimeGrid::new(0.0, 6.3, step).unwrap();
            let ds = sample_dataset(&model, &grid, shots, seed).unwrap().with_label(label);
            let back = parse_csv(&write_csv(&ds), "").unwrap();
            prop_assert_eq!(back, ds);
        }
    }
}
