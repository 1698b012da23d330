//! CSV schemas. All output is UTF-8 with LF line endings and a header row;
//! reals are written with six significant digits.

use std::io::{Read, Write};

use crate::analysis::ErrorReport;
use crate::error::{Error, Result};
use crate::estimator::{AlphaCase, AlphaEntry, AlphaProfile, TrpfCurve};
use crate::goldbach::GpRecord;

pub const RECORD_HEADER: [&str; 5] = ["two_n", "gp_count", "band", "egp", "igp"];
pub const TRPF_HEADER: [&str; 6] = ["logpx", "f2", "f3", "f4", "f5", "total"];
pub const ALPHA_HEADER: [&str; 3] = ["p", "alpha", "case"];
pub const REPORT_HEADER: [&str; 11] = [
    "band",
    "lo",
    "hi",
    "members",
    "mean_gp",
    "min_gp",
    "max_gp",
    "bias_egp",
    "bias_igp",
    "bandwidth_igp",
    "frac_within_bound",
];

/// Six significant digits in the style of C's `%g`: fixed notation for
/// decimal exponents in `[-4, 6)`, scientific otherwise, trailing zeros
/// dropped.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let fixed = format!("{:.*}", (5 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_header<W: Write>(out: &mut W, header: &[&str]) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    Ok(())
}

pub fn write_records<W: Write>(mut out: W, records: &[GpRecord]) -> Result<()> {
    write_header(&mut out, &RECORD_HEADER)?;
    for r in records {
        writeln!(out, "{},{},{},{},{}", r.two_n, r.gp_count, r.band, sig6(r.egp), sig6(r.igp))?;
    }
    out.flush()?;
    Ok(())
}

pub fn records_to_string(records: &[GpRecord]) -> String {
    let mut buf = Vec::new();
    write_records(&mut buf, records).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// A parsed CSV file addressed by column name.
#[derive(Debug, Clone)]
pub struct CsvTable {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let headers = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
        let rows = reader
            .records()
            .map(|row| Ok(row?.iter().map(|f| f.trim().to_string()).collect()))
            .collect::<Result<Vec<Vec<String>>>>()?;
        Ok(Self { headers, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Fails with a format error naming the first missing column.
    pub fn require(&self, columns: &[&str]) -> Result<()> {
        match columns.iter().find(|c| !self.headers.iter().any(|h| h == *c)) {
            Some(missing) => Err(Error::format(format!("missing column \"{missing}\""))),
            None => Ok(()),
        }
    }

    fn index(&self, column: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == column)
            .ok_or_else(|| Error::format(format!("missing column \"{column}\"")))
    }

    pub fn strings(&self, column: &str) -> Result<Vec<&str>> {
        let i = self.index(column)?;
        Ok(self.rows.iter().map(|row| row[i].as_str()).collect())
    }

    pub fn parsed<T: std::str::FromStr>(&self, column: &str) -> Result<Vec<T>> {
        let i = self.index(column)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(line, row)| {
                row[i].parse().map_err(|_| {
                    Error::format(format!("row {}: bad {column} value {:?}", line + 2, row[i]))
                })
            })
            .collect()
    }

    pub fn reals(&self, column: &str) -> Result<Vec<f64>> {
        self.parsed(column)
    }
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<GpRecord>> {
    let table = CsvTable::read(input)?;
    table.require(&RECORD_HEADER)?;
    let two_n = table.parsed::<u64>("two_n")?;
    let gp = table.parsed::<u64>("gp_count")?;
    let band = table.parsed("band")?;
    let egp = table.reals("egp")?;
    let igp = table.reals("igp")?;
    Ok(two_n
        .into_iter()
        .zip(gp)
        .zip(band)
        .zip(egp.into_iter().zip(igp))
        .map(|(((two_n, gp_count), band), (egp, igp))| GpRecord { two_n, gp_count, band, egp, igp })
        .collect())
}

pub fn write_trpf<W: Write>(mut out: W, curve: &TrpfCurve) -> Result<()> {
    write_header(&mut out, &TRPF_HEADER)?;
    for (i, g) in curve.grid.iter().enumerate() {
        let f = |k: usize| sig6(curve.per_factor[k][i]);
        writeln!(out, "{},{},{},{},{},{}", sig6(*g), f(0), f(1), f(2), f(3), sig6(curve.total[i]))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_alpha<W: Write>(mut out: W, profile: &AlphaProfile) -> Result<()> {
    write_header(&mut out, &ALPHA_HEADER)?;
    for e in &profile.entries {
        writeln!(out, "{},{},{}", e.p, sig6(e.alpha), e.case.as_str())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_alpha<R: Read>(input: R) -> Result<Vec<AlphaEntry>> {
    let table = CsvTable::read(input)?;
    table.require(&ALPHA_HEADER)?;
    let ps = table.parsed::<u64>("p")?;
    let alphas = table.reals("alpha")?;
    let cases = table.strings("case")?;
    ps.into_iter()
        .zip(alphas)
        .zip(cases)
        .map(|((p, alpha), case)| {
            let case = AlphaCase::parse(case)
                .ok_or_else(|| Error::format(format!("unknown alpha case {case:?}")))?;
            Ok(AlphaEntry { p, alpha, case })
        })
        .collect()
}

pub fn write_report<W: Write>(mut out: W, reports: &[ErrorReport]) -> Result<()> {
    write_header(&mut out, &REPORT_HEADER)?;
    for r in reports {
        let s = &r.stats;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            s.band,
            s.window.lo,
            s.window.hi,
            s.member_count,
            sig6(s.mean_gp),
            sig6(s.min_gp),
            sig6(s.max_gp),
            sig6(r.bias_egp),
            sig6(r.bias_igp),
            sig6(r.bandwidth_igp),
            sig6(r.frac_within_bound),
        )?;
    }
    out.flush()?;
    Ok(())
}
