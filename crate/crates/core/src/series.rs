//! Time-indexed records and their CSV form.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shortest round-trip decimal form; identical inputs always print identically.
pub fn fmt_float(x: f64) -> String {
    format!("{x}")
}

/// A scalar value sampled at a set of integer times (or lags, or prefix lengths).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<T> {
    pub t: Vec<usize>,
    pub values: Vec<T>,
}

impl<T: fmt::Display> Curve<T> {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W, t_name: &str, value_name: &str) -> std::io::Result<()> {
        writeln!(w, "{t_name},{value_name}")?;
        for (t, v) in self.t.iter().zip(&self.values) {
            writeln!(w, "{t},{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Observable {
    #[serde(rename = "m2")]
    M2,
    #[serde(rename = "m4")]
    M4,
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "S")]
    Shannon,
    #[serde(rename = "IPR")]
    Ipr,
    #[serde(rename = "JSD")]
    Jsd,
    #[serde(rename = "S_e")]
    Entanglement,
}

impl Observable {
    /// Canonical column order.
    pub const ALL: [Observable; 7] = [
        Observable::M2,
        Observable::M4,
        Observable::Kappa,
        Observable::Shannon,
        Observable::Ipr,
        Observable::Jsd,
        Observable::Entanglement,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Observable::M2 => "m2",
            Observable::M4 => "m4",
            Observable::Kappa => "kappa",
            Observable::Shannon => "S",
            Observable::Ipr => "IPR",
            Observable::Jsd => "JSD",
            Observable::Entanglement => "S_e",
        }
    }

    /// Whether the quantity only exists for the quantum walker.
    pub fn quantum_only(self) -> bool {
        matches!(self, Observable::Jsd | Observable::Entanglement)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.column().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config("record_fields", format!("unknown observable `{s}`")))
    }
}

/// Observables recorded along one evolution, one column per requested field.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub t: Vec<usize>,
    columns: Vec<(Observable, Vec<f64>)>,
}

impl ObservableSeries {
    /// Columns are kept in canonical order regardless of request order.
    pub fn new(fields: &[Observable]) -> Self {
        let mut fields = fields.to_vec();
        fields.sort();
        fields.dedup();
        ObservableSeries {
            t: Vec::new(),
            columns: fields.into_iter().map(|o| (o, Vec::new())).collect(),
        }
    }

    pub fn fields(&self) -> impl Iterator<Item = Observable> + '_ {
        self.columns.iter().map(|(o, _)| *o)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Appends one row; `value` is queried once per recorded field.
    pub fn push_with(&mut self, t: usize, mut value: impl FnMut(Observable) -> f64) {
        self.t.push(t);
        for (o, col) in &mut self.columns {
            col.push(value(*o));
        }
    }

    pub fn column(&self, o: Observable) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(c, _)| *c == o)
            .map(|(_, v)| v.as_slice())
    }

    /// `(t, value)` pairs for one field.
    pub fn pairs(&self, o: Observable) -> Option<Vec<(usize, f64)>> {
        self.column(o)
            .map(|v| self.t.iter().copied().zip(v.iter().copied()).collect())
    }

    /// Mean of a field over recorded times `t >= from`.
    pub fn tail_mean(&self, o: Observable, from: usize) -> Option<f64> {
        let col = self.column(o)?;
        let vals: Vec<f64> = self
            .t
            .iter()
            .zip(col)
            .filter(|(t, _)| **t >= from)
            .map(|(_, v)| *v)
            .collect();
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "t")?;
        for (o, _) in &self.columns {
            write!(w, ",{}", o.column())?;
        }
        writeln!(w)?;
        for (row, t) in self.t.iter().enumerate() {
            write!(w, "{t}")?;
            for (_, col) in &self.columns {
                write!(w, ",{}", fmt_float(col[row]))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_canonical() {
        let mut s = ObservableSeries::new(&[Observable::Ipr, Observable::M2, Observable::M2]);
        s.push_with(0, |o| if o == Observable::M2 { 0.0 } else { 1.0 });
        s.push_with(1, |o| if o == Observable::M2 { 1.0 } else { 2.0 });
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,m2,IPR\n0,0,1\n1,1,2\n");
        assert_eq!(s.tail_mean(Observable::Ipr, 1), Some(2.0));
        assert_eq!(s.column(Observable::Jsd), None);
    }

    #[test]
    fn observable_names_round_trip() {
        for o in Observable::ALL {
            assert_eq!(o.column().parse::<Observable>().unwrap(), o);
        }
        assert!("norm".parse::<Observable>().is_err());
    }
}
