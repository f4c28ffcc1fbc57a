//! Plain-text formats for states, moment tables, grids, reports, and
//! blind-pair scans.
//!
//! Every format opens with a `twomode.<kind> v1` schema line (grids and
//! blind-pair files carry it in a `#` comment preamble ahead of the CSV
//! header). Floats are written with the shortest exponent form that parses
//! back to the identical bits, complex values as `re im` column pairs, so
//! a write → read → write cycle is byte-identical. Data files contain no
//! timestamps or environment-dependent content; run metadata belongs in a
//! sidecar.

use std::fmt::Write as _;

use thiserror::Error;

use super::{BlindPair, BlindPairScan, GridCell, GridKind, RegionGrid};
use crate::fock::{FockState, LadderMonomial, MomentSource, MomentTable};
use crate::witness::{CriterionId, CrossCheck, Verdict, WitnessReport};
use crate::C64;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported schema: expected '{expected}', found '{found}'")]
    Schema { expected: String, found: String },
}

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

// ---------------------------------------------------------------------------
// line reader
// ---------------------------------------------------------------------------

struct Reader<'a> {
    lines: std::vec::IntoIter<(usize, &'a str)>,
    last_line: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Self {
            lines: lines.into_iter(),
            last_line: 0,
        }
    }

    fn next(&mut self) -> Result<(usize, &'a str), FormatError> {
        match self.lines.next() {
            Some((line, content)) => {
                self.last_line = line;
                Ok((line, content))
            }
            None => Err(perr(self.last_line + 1, "unexpected end of file")),
        }
    }

    fn finish(mut self) -> Result<(), FormatError> {
        match self.lines.next() {
            None => Ok(()),
            Some((line, content)) => Err(perr(
                line,
                format!("unexpected trailing content '{content}'"),
            )),
        }
    }

    fn expect_schema(&mut self, kind: &str) -> Result<(), FormatError> {
        let expected = format!("twomode.{kind} v1");
        let (_, found) = self.next()?;
        let found = found.strip_prefix("# ").unwrap_or(found);
        if found != expected {
            return Err(FormatError::Schema {
                expected,
                found: found.to_string(),
            });
        }
        Ok(())
    }

    /// Read a `key value` line, returning the value part.
    fn expect_kv(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (line, content) = self.next()?;
        let content = content.strip_prefix("# ").unwrap_or(content);
        match content.strip_prefix(key).map(str::trim_start) {
            Some(v) if !v.is_empty() => Ok((line, v)),
            _ => Err(perr(
                line,
                format!("expected '{key} <value>', found '{content}'"),
            )),
        }
    }
}

fn parse_f64(s: &str, line: usize, field: &str) -> Result<f64, FormatError> {
    let v: f64 = s
        .parse()
        .map_err(|_| perr(line, format!("malformed float in {field}: '{s}'")))?;
    if !v.is_finite() {
        return Err(perr(line, format!("non-finite value in {field}: '{s}'")));
    }
    Ok(v)
}

fn parse_int<T: std::str::FromStr>(s: &str, line: usize, field: &str) -> Result<T, FormatError> {
    s.parse()
        .map_err(|_| perr(line, format!("malformed integer in {field}: '{s}'")))
}

fn fields_of(content: &str) -> Vec<&str> {
    content.split_whitespace().collect()
}

// ---------------------------------------------------------------------------
// FockState
// ---------------------------------------------------------------------------

pub fn write_state(state: &FockState) -> String {
    let mut out = String::new();
    let entries: Vec<(usize, usize, C64)> = state.nonzero_amps().collect();
    writeln!(out, "twomode.state v1").unwrap();
    writeln!(out, "cutoff {}", state.cutoff()).unwrap();
    writeln!(out, "tail_bound {:e}", state.tail_bound()).unwrap();
    writeln!(out, "entries {}", entries.len()).unwrap();
    for (na, nb, a) in entries {
        writeln!(out, "{na} {nb} {:e} {:e}", a.re, a.im).unwrap();
    }
    out
}

pub fn read_state(text: &str) -> Result<FockState, FormatError> {
    let mut r = Reader::new(text);
    r.expect_schema("state")?;
    let (line, v) = r.expect_kv("cutoff")?;
    let cutoff: usize = parse_int(v, line, "cutoff")?;
    let (line, v) = r.expect_kv("tail_bound")?;
    let tail = parse_f64(v, line, "tail_bound")?;
    if tail < 0.0 {
        return Err(perr(line, "tail_bound must be non-negative"));
    }
    let (line, v) = r.expect_kv("entries")?;
    let count: usize = parse_int(v, line, "entries")?;
    let mut entries = Vec::with_capacity(count);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..count {
        let (line, content) = r.next()?;
        let f = fields_of(content);
        if f.len() != 4 {
            return Err(perr(
                line,
                format!("expected 'na nb re im', found '{content}'"),
            ));
        }
        let na: usize = parse_int(f[0], line, "na")?;
        let nb: usize = parse_int(f[1], line, "nb")?;
        if na > cutoff || nb > cutoff {
            return Err(perr(
                line,
                format!("index ({na}, {nb}) outside [0, {cutoff}]²"),
            ));
        }
        if !seen.insert((na, nb)) {
            return Err(perr(line, format!("duplicate entry for ({na}, {nb})")));
        }
        let re = parse_f64(f[2], line, "amplitude")?;
        let im = parse_f64(f[3], line, "amplitude")?;
        entries.push((na, nb, C64::new(re, im)));
    }
    r.finish()?;
    FockState::from_amplitudes(cutoff, &entries, tail)
        .map_err(|e| perr(0, format!("invalid state data: {e}")))
}

// ---------------------------------------------------------------------------
// MomentTable
// ---------------------------------------------------------------------------

pub fn write_moments(table: &MomentTable) -> String {
    let mut out = String::new();
    writeln!(out, "twomode.moments v1").unwrap();
    writeln!(out, "source {}", table.source().label()).unwrap();
    writeln!(out, "entries {}", table.len()).unwrap();
    for (m, v) in table.entries() {
        writeln!(
            out,
            "{} {} {} {} {:e} {:e}",
            m.raise_a, m.lower_a, m.raise_b, m.lower_b, v.re, v.im
        )
        .unwrap();
    }
    out
}

pub fn read_moments(text: &str, conjugation_tol: f64) -> Result<MomentTable, FormatError> {
    let mut r = Reader::new(text);
    r.expect_schema("moments")?;
    let (line, v) = r.expect_kv("source")?;
    let source =
        MomentSource::from_label(v).ok_or(perr(line, format!("unknown moment source '{v}'")))?;
    let (line, v) = r.expect_kv("entries")?;
    let count: usize = parse_int(v, line, "entries")?;
    let mut entries = Vec::with_capacity(count);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..count {
        let (line, content) = r.next()?;
        let f = fields_of(content);
        if f.len() != 6 {
            return Err(perr(
                line,
                format!("expected 'k l p q re im', found '{content}'"),
            ));
        }
        let mono = LadderMonomial::new(
            parse_int(f[0], line, "raise_a")?,
            parse_int(f[1], line, "lower_a")?,
            parse_int(f[2], line, "raise_b")?,
            parse_int(f[3], line, "lower_b")?,
        );
        if !seen.insert(mono) {
            return Err(perr(line, format!("duplicate entry for ⟨{mono}⟩")));
        }
        let re = parse_f64(f[4], line, "moment")?;
        let im = parse_f64(f[5], line, "moment")?;
        entries.push((mono, C64::new(re, im)));
    }
    r.finish()?;
    MomentTable::from_entries(entries, source, conjugation_tol)
        .map_err(|e| perr(0, format!("invalid moment table: {e}")))
}

// ---------------------------------------------------------------------------
// witness reports
// ---------------------------------------------------------------------------

pub fn write_reports(subject: &str, reports: &[WitnessReport]) -> String {
    let mut out = String::new();
    writeln!(out, "twomode.report v1").unwrap();
    writeln!(out, "subject {subject}").unwrap();
    writeln!(out, "reports {}", reports.len()).unwrap();
    for rep in reports {
        writeln!(
            out,
            "report {} {:e} {:e} {:e} {} {:016x}",
            rep.criterion.label(),
            rep.lhs,
            rep.rhs,
            rep.margin,
            rep.verdict.label(),
            rep.inputs_hash
        )
        .unwrap();
        for cc in &rep.cross_checks {
            writeln!(
                out,
                "crosscheck {} {:e} {:e} {:e} {:e} {:e} {}",
                cc.quantity,
                cc.reference.re,
                cc.reference.im,
                cc.numeric.re,
                cc.numeric.im,
                cc.delta,
                cc.within_tolerance
            )
            .unwrap();
        }
    }
    out
}

pub fn read_reports(text: &str) -> Result<(String, Vec<WitnessReport>), FormatError> {
    let mut r = Reader::new(text);
    r.expect_schema("report")?;
    let (_, subject) = r.expect_kv("subject")?;
    let subject = subject.to_string();
    let (line, v) = r.expect_kv("reports")?;
    let count: usize = parse_int(v, line, "reports")?;
    let mut reports: Vec<WitnessReport> = Vec::with_capacity(count);
    while let Ok((line, content)) = r.next() {
        let f = fields_of(content);
        match f.first().copied() {
            Some("report") => {
                if f.len() != 7 {
                    return Err(perr(
                        line,
                        "expected 'report <id> <lhs> <rhs> <margin> <verdict> <hash>'",
                    ));
                }
                let criterion = CriterionId::from_label(f[1])
                    .ok_or(perr(line, format!("unknown criterion '{}'", f[1])))?;
                let verdict = Verdict::from_label(f[5])
                    .ok_or(perr(line, format!("unknown verdict '{}'", f[5])))?;
                let inputs_hash = u64::from_str_radix(f[6], 16)
                    .map_err(|_| perr(line, format!("malformed hash '{}'", f[6])))?;
                reports.push(WitnessReport {
                    criterion,
                    lhs: parse_f64(f[2], line, "lhs")?,
                    rhs: parse_f64(f[3], line, "rhs")?,
                    margin: parse_f64(f[4], line, "margin")?,
                    verdict,
                    inputs_hash,
                    cross_checks: Vec::new(),
                });
            }
            Some("crosscheck") => {
                if f.len() != 8 {
                    return Err(perr(
                        line,
                        "expected 'crosscheck <quantity> <ref re im> <num re im> <delta> <within>'",
                    ));
                }
                let rep = reports
                    .last_mut()
                    .ok_or(perr(line, "crosscheck before any report line"))?;
                rep.cross_checks.push(CrossCheck {
                    quantity: f[1].to_string(),
                    reference: C64::new(
                        parse_f64(f[2], line, "reference")?,
                        parse_f64(f[3], line, "reference")?,
                    ),
                    numeric: C64::new(
                        parse_f64(f[4], line, "numeric")?,
                        parse_f64(f[5], line, "numeric")?,
                    ),
                    delta: parse_f64(f[6], line, "delta")?,
                    within_tolerance: parse_bool(f[7], line)?,
                });
            }
            _ => return Err(perr(line, format!("unexpected line '{content}'"))),
        }
    }
    if reports.len() != count {
        return Err(perr(
            0,
            format!("expected {count} reports, found {}", reports.len()),
        ));
    }
    Ok((subject, reports))
}

fn parse_bool(s: &str, line: usize) -> Result<bool, FormatError> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(perr(line, format!("malformed boolean '{s}'"))),
    }
}

// ---------------------------------------------------------------------------
// region grids (CSV with a commented preamble)
// ---------------------------------------------------------------------------

pub fn write_grid(grid: &RegionGrid) -> String {
    let (row_label, col_label) = grid.kind.axis_labels();
    let mut out = String::new();
    writeln!(out, "# twomode.grid v1").unwrap();
    writeln!(out, "# kind {}", grid.kind.label()).unwrap();
    writeln!(
        out,
        "# parameter {:e} {:e}",
        grid.parameter.re, grid.parameter.im
    )
    .unwrap();
    writeln!(out, "# rows {}", grid.row_max).unwrap();
    writeln!(out, "# cols {}", grid.col_max).unwrap();
    writeln!(out, "{row_label},{col_label},detectable,margin").unwrap();
    for cell in &grid.cells {
        writeln!(
            out,
            "{},{},{},{:e}",
            cell.row, cell.col, cell.detectable, cell.margin
        )
        .unwrap();
    }
    out
}

pub fn read_grid(text: &str) -> Result<RegionGrid, FormatError> {
    let mut r = Reader::new(text);
    r.expect_schema("grid")?;
    let (line, v) = r.expect_kv("kind")?;
    let kind = GridKind::from_label(v).ok_or(perr(line, format!("unknown grid kind '{v}'")))?;
    let (line, v) = r.expect_kv("parameter")?;
    let f = fields_of(v);
    if f.len() != 2 {
        return Err(perr(line, "expected 'parameter <re> <im>'"));
    }
    let parameter = C64::new(
        parse_f64(f[0], line, "parameter")?,
        parse_f64(f[1], line, "parameter")?,
    );
    let (line, v) = r.expect_kv("rows")?;
    let row_max: u32 = parse_int(v, line, "rows")?;
    let (line, v) = r.expect_kv("cols")?;
    let col_max: u32 = parse_int(v, line, "cols")?;

    let (line, header) = r.next()?;
    let (row_label, col_label) = kind.axis_labels();
    let expected_header = format!("{row_label},{col_label},detectable,margin");
    if header != expected_header {
        return Err(perr(
            line,
            format!("expected header '{expected_header}', found '{header}'"),
        ));
    }
    let count = (row_max as usize + 1) * (col_max as usize + 1);
    let mut cells = Vec::with_capacity(count);
    for _ in 0..count {
        let (line, content) = r.next()?;
        let f: Vec<&str> = content.split(',').collect();
        if f.len() != 4 {
            return Err(perr(
                line,
                format!("expected 4 CSV fields, found '{content}'"),
            ));
        }
        cells.push(GridCell {
            row: parse_int(f[0], line, row_label)?,
            col: parse_int(f[1], line, col_label)?,
            detectable: parse_bool(f[2], line)?,
            margin: parse_f64(f[3], line, "margin")?,
        });
    }
    r.finish()?;
    // no holes: enforce exact row-major enumeration
    let mut idx = 0usize;
    for row in 0..=row_max {
        for col in 0..=col_max {
            let cell = &cells[idx];
            if cell.row != row || cell.col != col {
                return Err(perr(
                    0,
                    format!(
                        "grid cells out of order: expected ({row}, {col}), found ({}, {})",
                        cell.row, cell.col
                    ),
                ));
            }
            idx += 1;
        }
    }
    Ok(RegionGrid {
        kind,
        parameter,
        row_max,
        col_max,
        cells,
    })
}

// ---------------------------------------------------------------------------
// blind pairs (CSV with a commented preamble)
// ---------------------------------------------------------------------------

pub fn write_blind(scan: &BlindPairScan) -> String {
    let mut out = String::new();
    writeln!(out, "# twomode.blind v1").unwrap();
    writeln!(out, "# limit {}", scan.limit).unwrap();
    writeln!(out, "index,m,n").unwrap();
    for (i, p) in scan.pairs.iter().enumerate() {
        writeln!(out, "{},{},{}", i + 1, p.m, p.n).unwrap();
    }
    out
}

pub fn read_blind(text: &str) -> Result<BlindPairScan, FormatError> {
    let mut r = Reader::new(text);
    r.expect_schema("blind")?;
    let (line, v) = r.expect_kv("limit")?;
    let limit: u64 = parse_int(v, line, "limit")?;
    let (line, header) = r.next()?;
    if header != "index,m,n" {
        return Err(perr(
            line,
            format!("expected header 'index,m,n', found '{header}'"),
        ));
    }
    let mut pairs = Vec::new();
    let mut expect_index = 1u64;
    while let Ok((line, content)) = r.next() {
        let f: Vec<&str> = content.split(',').collect();
        if f.len() != 3 {
            return Err(perr(
                line,
                format!("expected 3 CSV fields, found '{content}'"),
            ));
        }
        let index: u64 = parse_int(f[0], line, "index")?;
        if index != expect_index {
            return Err(perr(
                line,
                format!("expected index {expect_index}, found {index}"),
            ));
        }
        expect_index += 1;
        let pair = BlindPair {
            m: parse_int(f[1], line, "m")?,
            n: parse_int(f[2], line, "n")?,
        };
        if !pair.satisfies_equation() {
            return Err(perr(
                line,
                format!("({}, {}) fails the defining equation", pair.m, pair.n),
            ));
        }
        pairs.push(pair);
    }
    let notes = super::blind_notes(&pairs);
    Ok(BlindPairScan {
        limit,
        pairs,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{build_bsn, build_tmsn};
    use crate::survey::{bsn_hz_region, enumerate_blind_pairs, tmsn_region};
    use crate::witness::{full_report, CriterionId};
    use crate::Tolerances;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn state_round_trip_is_bit_identical() {
        let s = build_tmsn(1, 2, c(0.7, 0.0), 40).unwrap();
        let text = write_state(&s);
        let back = read_state(&text).unwrap();
        assert_eq!(s, back);
        assert_eq!(text, write_state(&back));
    }

    #[test]
    fn complex_state_round_trip() {
        let s = build_bsn(2, 1, c(0.4, -0.9), 5).unwrap();
        let back = read_state(&write_state(&s)).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn state_schema_mismatch_detected() {
        let s = build_bsn(1, 0, c(1.0, 0.0), 2).unwrap();
        let text = write_state(&s).replace("v1", "v9");
        assert!(matches!(read_state(&text), Err(FormatError::Schema { .. })));
        let text = write_state(&s).replace("twomode.state", "twomode.moments");
        assert!(matches!(read_state(&text), Err(FormatError::Schema { .. })));
    }

    #[test]
    fn malformed_amplitude_names_line() {
        let s = build_bsn(1, 0, c(1.0, 0.0), 2).unwrap();
        let text = write_state(&s).replace("-7.0710678118654", "x7.0710678118654");
        match read_state(&text) {
            Err(FormatError::Parse { line, msg }) => {
                assert!(
                    line >= 5,
                    "data lines start after the 4-line header, got {line}"
                );
                assert!(msg.contains("malformed float"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_entries_rejected() {
        let text =
            "twomode.state v1\ncutoff 2\ntail_bound 0e0\nentries 2\n1 0 1e0 0e0\n1 0 0e0 0e0\n";
        match read_state(text) {
            Err(FormatError::Parse { line, msg }) => {
                assert_eq!(line, 6);
                assert!(msg.contains("duplicate"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "twomode.moments v1\nsource external\nentries 2\n\
                    0 0 0 0 1e0 0e0\n0 0 0 0 1e0 0e0\n";
        match read_moments(text, 1e-10) {
            Err(FormatError::Parse { line, msg }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("duplicate"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_index_rejected() {
        let text = "twomode.state v1\ncutoff 2\ntail_bound 0e0\nentries 1\n3 0 1e0 0e0\n";
        match read_state(text) {
            Err(FormatError::Parse { line, msg }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("outside"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn moments_round_trip() {
        let s = build_bsn(2, 1, c(0.8, 0.3), 7).unwrap();
        let t = MomentTable::of_state(&s, 4);
        let text = write_moments(&t);
        let back = read_moments(&text, 1e-10).unwrap();
        assert_eq!(t, back);
        assert_eq!(text, write_moments(&back));
    }

    #[test]
    fn truncated_moments_file_errors() {
        let s = build_bsn(1, 0, c(1.0, 0.0), 3).unwrap();
        let t = MomentTable::of_state(&s, 2);
        let text = write_moments(&t);
        let truncated: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            read_moments(&truncated, 1e-10),
            Err(FormatError::Parse { .. })
        ));
    }

    #[test]
    fn reports_round_trip() {
        let spec = crate::states::StateSpec::Bsn {
            photons_a: 1,
            photons_b: 1,
            r: c(1.0, 0.0),
        };
        let reports = full_report(&spec, &Tolerances::default()).unwrap();
        let text = write_reports(&spec.label(), &reports);
        let (subject, back) = read_reports(&text).unwrap();
        assert_eq!(subject, spec.label());
        assert_eq!(reports, back);
        assert_eq!(text, write_reports(&subject, &back));
        assert_eq!(
            back.iter().map(|r| r.criterion).collect::<Vec<_>>(),
            CriterionId::ALL
        );
    }

    #[test]
    fn grid_round_trip_and_shape() {
        let g = tmsn_region(c(0.7, 0.0), 10, 10).unwrap();
        let text = write_grid(&g);
        // 6 preamble/header lines + 121 data rows
        assert_eq!(text.lines().count(), 6 + 121);
        let back = read_grid(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(text, write_grid(&back));

        let g = bsn_hz_region(c(1.0, 0.0), 4, 7).unwrap();
        let back = read_grid(&write_grid(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn blind_round_trip() {
        let scan = enumerate_blind_pairs(1_000_000);
        let text = write_blind(&scan);
        assert_eq!(text.lines().count(), 3 + 11);
        let back = read_blind(&text).unwrap();
        assert_eq!(scan, back);
        assert_eq!(text, write_blind(&back));
    }

    #[test]
    fn blind_rejects_corrupted_pair() {
        let scan = enumerate_blind_pairs(100_000);
        let text = write_blind(&scan).replace("8,3976,14840", "8,3976,14841");
        match read_blind(&text) {
            Err(FormatError::Parse { msg, .. }) => assert!(msg.contains("defining equation")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
