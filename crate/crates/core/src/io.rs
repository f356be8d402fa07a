//! Domain spec files and number formatting for reports.
//!
//! A spec is a JSON object
//!
//! ```json
//! {"gaps": [["-inf", 0], [1, 2]], "generator": {"kind": "geometric", "base": 2, "ratio": 2, "fraction": 0.5}, "truncate": 16}
//! ```
//!
//! where `gaps` lists explicit gaps (`"-inf"`/`"inf"` for unbounded ends),
//! `generator` optionally describes infinitely many more, and `truncate` is
//! the number of generator units to materialize.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::domain::{Gap, GapDomain, DEFAULT_TRUNCATION};
use crate::error::{Error, Result};
use crate::generator::GeneratorSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default)]
    pub gaps: Vec<Gap>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncate: Option<usize>,
}

impl DomainSpec {
    pub fn parse(text: &str) -> Result<DomainSpec> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    /// Build and validate the domain; `truncate` overrides the spec's count.
    pub fn to_domain(&self, truncate: Option<usize>) -> Result<GapDomain> {
        let t = truncate.or(self.truncate).unwrap_or(DEFAULT_TRUNCATION);
        GapDomain::with_tail(self.gaps.clone(), self.generator.clone(), t)
    }

    pub fn from_domain(domain: &GapDomain) -> DomainSpec {
        DomainSpec {
            gaps: domain.explicit_gaps().to_vec(),
            generator: domain.tail().cloned(),
            truncate: domain.tail().map(|_| domain.truncation()),
        }
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

/// Parse a spec and build its domain.
pub fn parse_domain(text: &str) -> Result<GapDomain> {
    DomainSpec::parse(text)?.to_domain(None)
}

/// A number with 17 significant digits, enough to read back the same `f64`.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Pretty JSON with every float written by [`fmt17`]; non-finite floats
/// become `null`.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fixed17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

struct Fixed17(PrettyFormatter<'static>);

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip_is_bit_exact() {
        let text = r#"{"gaps": [["-inf", 0], [0.1, 0.30000000000000004], [1e300, "inf"]]}"#;
        let spec = DomainSpec::parse(text).unwrap();
        let again = DomainSpec::parse(&spec.to_json()).unwrap();
        assert_eq!(spec, again);
        let d = again.to_domain(None).unwrap();
        assert_eq!(d.gap_bounds()[1], (0.1, 0.30000000000000004));
    }

    #[test]
    fn generator_spec() {
        let text = r#"{"gaps": [["-inf", 0]], "generator": {"kind": "geometric", "base": 2, "ratio": 2, "fraction": 0.5}, "truncate": 3}"#;
        let d = parse_domain(text).unwrap();
        assert_eq!(d.gap_bounds()[1..], [(2.0, 3.0), (4.0, 6.0), (8.0, 12.0)]);
        let spec = DomainSpec::from_domain(&d);
        assert_eq!(spec.truncate, Some(3));
    }

    #[test]
    fn unknown_fields_are_errors() {
        assert!(matches!(DomainSpec::parse(r#"{"gap": []}"#), Err(Error::Spec(_))));
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        let s = to_json_string(&[1.5f64, f64::INFINITY]);
        assert!(s.contains("1.5000000000000000e0"));
        assert!(s.contains("null"));
    }
}
