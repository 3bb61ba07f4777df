use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Rounds to 12 significant digits; non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Text form of a real at 12 significant digits, switching to exponent
/// notation for very small or very large magnitudes.
pub fn format_real(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 || !r.is_finite() || (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

pub(crate) fn ser_sig<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

pub(crate) fn ser_sig_opt<S: Serializer>(
    x: &Option<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_f64(round_sig(*v)),
        None => s.serialize_none(),
    }
}

fn ser_inputs<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, round_sig(*v))))
}

/// One evaluated closed-form bound.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundReport {
    pub formula_id: String,
    #[serde(serialize_with = "ser_sig")]
    pub value: f64,
    /// `log₂ value`, finite even where `value` underflows.
    #[serde(serialize_with = "ser_sig")]
    pub log2_value: f64,
    #[serde(serialize_with = "ser_inputs")]
    pub inputs: BTreeMap<String, f64>,
    #[serde(serialize_with = "ser_sig_opt")]
    pub dominated: Option<f64>,
}

impl BoundReport {
    pub(crate) fn new(formula_id: &str, log2_value: f64, inputs: &[(&str, f64)]) -> Self {
        Self {
            formula_id: formula_id.to_string(),
            value: log2_value.exp2(),
            log2_value,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            dominated: None,
        }
    }

    /// Attaches an exactly computed quantity the bound should dominate.
    pub fn with_dominated(mut self, q: f64) -> Self {
        self.dominated = Some(q);
        self
    }

    /// `dominated ≤ value + tol` (vacuously true without a dominated value).
    pub fn holds(&self, tol: f64) -> bool {
        self.dominated.map_or(true, |q| q <= self.value + tol)
    }
}

/// CSV with columns `formula_id, <union of input names>, value, log2_value,
/// dominated`; missing cells are left empty.
pub fn reports_to_csv(reports: &[BoundReport]) -> Result<String> {
    let keys: BTreeSet<&str> = reports
        .iter()
        .flat_map(|r| r.inputs.keys().map(String::as_str))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["formula_id"];
    header.extend(keys.iter().copied());
    header.extend(["value", "log2_value", "dominated"]);
    let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    w.write_record(&header).map_err(io)?;
    for r in reports {
        let mut row = vec![r.formula_id.clone()];
        row.extend(
            keys.iter()
                .map(|k| r.inputs.get(*k).map(|v| format_real(*v)).unwrap_or_default()),
        );
        row.push(format_real(r.value));
        row.push(format_real(r.log2_value));
        row.push(r.dominated.map(format_real).unwrap_or_default());
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_formatting() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_real(2f64.powi(-60)), "8.67361737988e-19");
        assert_eq!(format_real(0.0), "0");
    }

    #[test]
    fn csv_union_of_columns() {
        let a = BoundReport::new("a", -1.0, &[("n", 4.0)]);
        let b = BoundReport::new("b", 0.0, &[("p", 0.1)]).with_dominated(0.25);
        let text = reports_to_csv(&[a, b]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "formula_id,n,p,value,log2_value,dominated");
        assert_eq!(lines[1], "a,4,,0.5,-1,");
        assert_eq!(lines[2], "b,,0.1,1,0,0.25");
    }
}
