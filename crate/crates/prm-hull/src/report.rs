//! Text forms of hull reports, check records and field moduli.
//!
//! A report is one `key: value` pair per line; absent values are written as
//! `none`. Check records are tab-separated, one per line.

use std::fmt;

use crate::error::{Error, Result};
use crate::oracle::CheckRecord;
use crate::theory::{
    classify, code_length, dual_order, dual_structure, hull_dim_formula, hull_min_distance, prm_dimension,
    prm_min_distance, ClassFlag, Classification, DualStructure, HullSource,
};

/// Formula-side parameters of PRM(q, m, v) and its hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullReport {
    pub q: u32,
    pub m: u32,
    pub v: u32,
    pub dual_order: u32,
    pub length: u64,
    pub dimension: u64,
    pub min_distance: u64,
    pub dual: DualStructure,
    pub classification: Classification,
    pub hull_dim: Option<u64>,
    pub hull_source: Option<HullSource>,
    pub hull_min_distance: Option<u64>,
}

const KEYS: [&str; 12] = [
    "q",
    "m",
    "v",
    "dual_order",
    "length",
    "dimension",
    "min_distance",
    "dual",
    "classification",
    "hull_dim",
    "hull_source",
    "hull_min_distance",
];

impl HullReport {
    pub fn new(q: u32, m: u32, v: u32) -> Result<Self> {
        let formula = hull_dim_formula(q, m, v)?;
        Ok(HullReport {
            q,
            m,
            v,
            dual_order: dual_order(q, m, v)?,
            length: code_length(q, m),
            dimension: prm_dimension(q, m, v)?,
            min_distance: prm_min_distance(q, m, v)?,
            dual: dual_structure(q, m, v)?,
            classification: classify(q, m, v)?,
            hull_dim: formula.map(|f| f.dim),
            hull_source: formula.map(|f| f.source),
            hull_min_distance: hull_min_distance(q, m, v)?,
        })
    }

    pub fn to_text(&self) -> String {
        let opt = |x: Option<u64>| x.map_or_else(|| "none".to_string(), |v| v.to_string());
        let values = [
            self.q.to_string(),
            self.m.to_string(),
            self.v.to_string(),
            self.dual_order.to_string(),
            self.length.to_string(),
            self.dimension.to_string(),
            self.min_distance.to_string(),
            format_dual(self.dual),
            self.classification.to_string(),
            opt(self.hull_dim),
            self.hull_source.map_or_else(|| "none".to_string(), |s| s.tag().to_string()),
            opt(self.hull_min_distance),
        ];
        KEYS.iter().zip(values).map(|(k, v)| format!("{k}: {v}\n")).collect()
    }
}

impl fmt::Display for HullReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn format_dual(d: DualStructure) -> String {
    match d {
        DualStructure::PlainDual(l) => format!("plain {l}"),
        DualStructure::SpanWithOnes(l) => format!("with-ones {l}"),
    }
}

fn parse_dual(s: &str) -> Option<DualStructure> {
    let (kind, l) = s.split_once(' ')?;
    let l = parse_u32(l)?;
    match kind {
        "plain" => Some(DualStructure::PlainDual(l)),
        "with-ones" => Some(DualStructure::SpanWithOnes(l)),
        _ => None,
    }
}

/// Decimal without sign, leading zeros or surrounding space.
fn parse_u64(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    s.parse().ok()
}

fn parse_u32(s: &str) -> Option<u32> {
    parse_u64(s).and_then(|v| u32::try_from(v).ok())
}

/// Parses the output of [`HullReport::to_text`]. Every key must appear
/// exactly once, in the written order.
pub fn parse_report(text: &str) -> Result<HullReport> {
    let lines: Vec<&str> = text.strip_suffix('\n').unwrap_or(text).split('\n').collect();
    if lines.len() != KEYS.len() {
        return Err(Error::Parse { line: lines.len().min(KEYS.len()) + 1, msg: format!("expected {} lines", KEYS.len()) });
    }
    let mut vals = Vec::with_capacity(KEYS.len());
    for (i, (line, key)) in lines.iter().zip(KEYS).enumerate() {
        let bad = |msg: String| Error::Parse { line: i + 1, msg };
        let (k, v) = line.split_once(": ").ok_or_else(|| bad("expected `key: value`".into()))?;
        if k != key {
            return Err(bad(format!("expected key `{key}`, found `{k}`")));
        }
        vals.push(v);
    }
    let err = |i: usize| Error::Parse { line: i + 1, msg: format!("bad value for `{}`: {:?}", KEYS[i], vals[i]) };
    let num32 = |i: usize| parse_u32(vals[i]).ok_or_else(|| err(i));
    let num64 = |i: usize| parse_u64(vals[i]).ok_or_else(|| err(i));
    let opt64 = |i: usize| if vals[i] == "none" { Ok(None) } else { num64(i).map(Some) };
    let classification = {
        let flags: Option<Vec<ClassFlag>> = vals[8].split(',').map(|s| s.parse().ok()).collect();
        let flags = flags.ok_or_else(|| err(8))?;
        let c = Classification::from_flags(flags.iter().copied());
        if c.flags().count() != flags.len() || c.to_string() != vals[8] {
            return Err(err(8));
        }
        c
    };
    let hull_source = if vals[10] == "none" { None } else { Some(HullSource::from_tag(vals[10]).ok_or_else(|| err(10))?) };
    Ok(HullReport {
        q: num32(0)?,
        m: num32(1)?,
        v: num32(2)?,
        dual_order: num32(3)?,
        length: num64(4)?,
        dimension: num64(5)?,
        min_distance: num64(6)?,
        dual: parse_dual(vals[7]).ok_or_else(|| err(7))?,
        classification,
        hull_dim: opt64(9)?,
        hull_source,
        hull_min_distance: opt64(11)?,
    })
}

/// One tab-separated line: `q m v check formula oracle pass|fail`.
pub fn format_record(r: &CheckRecord) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.q,
        r.m,
        r.v,
        r.check,
        r.formula,
        r.oracle,
        if r.pass { "pass" } else { "fail" }
    )
}

/// Inverse of [`format_record`] for a single line.
pub fn parse_record(line: &str) -> Result<CheckRecord> {
    let bad = |msg: &str| Error::Parse { line: 1, msg: msg.into() };
    let f: Vec<&str> = line.split('\t').collect();
    if f.len() != 7 {
        return Err(bad("expected 7 tab-separated fields"));
    }
    if f[3..6].iter().any(|s| s.is_empty() || s.contains(['\n', '\r'])) {
        return Err(bad("empty or multi-line field"));
    }
    let pass = match f[6] {
        "pass" => true,
        "fail" => false,
        _ => return Err(bad("verdict must be `pass` or `fail`")),
    };
    let num = |s: &str| parse_u32(s).ok_or_else(|| bad("bad instance number"));
    Ok(CheckRecord {
        q: num(f[0])?,
        m: num(f[1])?,
        v: num(f[2])?,
        check: f[3].into(),
        formula: f[4].into(),
        oracle: f[5].into(),
        pass,
    })
}

/// Human-readable form of a record.
pub fn describe_record(r: &CheckRecord) -> String {
    format!(
        "[{}] ({},{},{}) {}: formula {}, oracle {}",
        if r.pass { "PASS" } else { "FAIL" },
        r.q,
        r.m,
        r.v,
        r.check,
        r.formula,
        r.oracle
    )
}

/// Parses comma-separated modulus coefficients, constant term first:
/// `1,1,0,1` is `1 + x + x^3`. Only syntax is checked here.
pub fn parse_modulus(s: &str) -> Result<Vec<u32>> {
    let bad = |msg: String| Error::Parse { line: 1, msg };
    let s = s.trim();
    if s.is_empty() {
        return Err(bad("empty modulus".into()));
    }
    s.split(',')
        .map(|c| parse_u32(c.trim()).ok_or_else(|| bad(format!("bad coefficient {c:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_example() {
        let r = HullReport::new(11, 3, 14).unwrap();
        assert_eq!(r.hull_dim, Some(555));
        assert_eq!(r.length, 1464);
        assert_eq!(r.dual, DualStructure::PlainDual(16));
        let text = r.to_text();
        assert!(text.contains("hull_dim: 555\n"));
        assert!(text.contains("hull_source: range-c\n"));
        assert_eq!(parse_report(&text).unwrap(), r);
    }

    #[test]
    fn report_none_values() {
        let r = HullReport::new(5, 3, 12).unwrap();
        assert_eq!(r.hull_min_distance, None);
        assert!(r.to_text().contains("hull_min_distance: none\n"));
        let r = HullReport::new(11, 5, 22).unwrap();
        assert_eq!(r.hull_dim, None);
        assert!(r.to_text().contains("hull_source: none\n"));
        assert_eq!(parse_report(&r.to_text()).unwrap(), r);
    }

    #[test]
    fn report_rejects_malformed() {
        let text = HullReport::new(5, 3, 6).unwrap().to_text();
        assert!(parse_report(&text.replace("q: 5", "q: 05")).is_err());
        assert!(parse_report(&text.replace("m: 3", "n: 3")).is_err());
        assert!(parse_report(&text.replace("self-dual", "selfdual")).is_err());
        assert!(parse_report(&text.replace("plain 6", "plain")).is_err());
        assert!(parse_report(&format!("{text}extra: 1\n")).is_err());
        assert!(parse_report("").is_err());
    }

    #[test]
    fn record_roundtrip() {
        let r = CheckRecord {
            q: 8,
            m: 4,
            v: 13,
            check: "hull-formula[range-d]".into(),
            formula: "1682".into(),
            oracle: "1682".into(),
            pass: true,
        };
        let line = format_record(&r);
        assert_eq!(line, "8\t4\t13\thull-formula[range-d]\t1682\t1682\tpass");
        assert_eq!(parse_record(&line).unwrap(), r);
        assert!(parse_record("8\t4\t13\tx\t1\t1\tok").is_err());
        assert!(parse_record("8\t4\t13\tx\t1\t1").is_err());
        assert!(describe_record(&r).starts_with("[PASS] (8,4,13)"));
    }

    #[test]
    fn modulus_syntax() {
        assert_eq!(parse_modulus("1,1,0,1").unwrap(), vec![1, 1, 0, 1]);
        assert_eq!(parse_modulus(" 2, 1 ").unwrap(), vec![2, 1]);
        assert!(parse_modulus("").is_err());
        assert!(parse_modulus("1,,1").is_err());
        assert!(parse_modulus("1,-1").is_err());
        assert!(parse_modulus("99999999999").is_err());
    }
}
