//! A minimal JSON tree with a fixed textual form: object keys sorted,
//! floats always written with 17 significant digits.

use std::collections::BTreeMap;
use std::fmt::Write;

use abel_core::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(BTreeMap<String, Json>),
}

impl Json {
    pub fn object<K: Into<String>>(entries: impl IntoIterator<Item = (K, Json)>) -> Self {
        Json::Object(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn complex(z: C64) -> Self {
        Json::Array(vec![Json::Float(z.re), Json::Float(z.im)])
    }

    /// Same layout as the matrix input files, so a reported matrix can be fed back in.
    pub fn matrix(m: &ComplexMatrix) -> Self {
        Json::object([
            ("rows", Json::from(m.rows())),
            ("cols", Json::from(m.cols())),
            ("data", Json::Array(m.data().iter().map(|&z| Json::complex(z)).collect())),
        ])
    }

    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, Some(0));
        out.push('\n');
        out
    }

    pub fn compact(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, None);
        out
    }

    fn write(&self, out: &mut String, indent: Option<usize>) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => write!(out, "{i}").unwrap(),
            Json::Float(x) => write_float(out, *x),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings always serialize")),
            Json::Array(items) => write_seq(out, indent, '[', ']', items.iter(), |out, item, ind| item.write(out, ind)),
            Json::Object(map) => write_seq(out, indent, '{', '}', map.iter(), |out, (k, v), ind| {
                out.push_str(&serde_json::to_string(k).expect("strings always serialize"));
                out.push_str(if ind.is_some() { ": " } else { ":" });
                v.write(out, ind);
            }),
        }
    }
}

/// Non-finite values have no JSON literal and are written as strings.
fn write_float(out: &mut String, x: f64) {
    if x.is_finite() {
        write!(out, "{x:.16e}").unwrap();
    } else if x.is_nan() {
        out.push_str("\"nan\"");
    } else if x > 0.0 {
        out.push_str("\"inf\"");
    } else {
        out.push_str("\"-inf\"");
    }
}

fn write_seq<I, T>(
    out: &mut String,
    indent: Option<usize>,
    open: char,
    close: char,
    items: I,
    mut each: impl FnMut(&mut String, T, Option<usize>),
) where
    I: ExactSizeIterator<Item = T>,
{
    out.push(open);
    if items.len() == 0 {
        out.push(close);
        return;
    }
    let inner = indent.map(|i| i + 2);
    for (i, item) in items.enumerate() {
        if i > 0 {
            out.push(',');
        }
        if let Some(w) = inner {
            out.push('\n');
            out.push_str(&" ".repeat(w));
        }
        each(out, item, inner);
    }
    if let Some(w) = indent {
        out.push('\n');
        out.push_str(&" ".repeat(w));
    }
    out.push(close);
}

impl From<bool> for Json {
    fn from(b: bool) -> Self {
        Json::Bool(b)
    }
}

impl From<f64> for Json {
    fn from(x: f64) -> Self {
        Json::Float(x)
    }
}

impl From<usize> for Json {
    fn from(n: usize) -> Self {
        Json::Int(n as i64)
    }
}

impl From<u64> for Json {
    fn from(n: u64) -> Self {
        Json::Int(n as i64)
    }
}

impl From<u32> for Json {
    fn from(n: u32) -> Self {
        Json::Int(n as i64)
    }
}

impl From<&str> for Json {
    fn from(s: &str) -> Self {
        Json::Str(s.to_owned())
    }
}

impl From<String> for Json {
    fn from(s: String) -> Self {
        Json::Str(s)
    }
}

impl<T: Into<Json>> From<Option<T>> for Json {
    fn from(v: Option<T>) -> Self {
        v.map_or(Json::Null, Into::into)
    }
}

impl<T: Into<Json>> From<Vec<T>> for Json {
    fn from(v: Vec<T>) -> Self {
        Json::Array(v.into_iter().map(Into::into).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_floats_fixed() {
        let j = Json::object([("b", Json::from(0.1)), ("a", Json::from(1usize))]);
        assert_eq!(j.compact(), r#"{"a":1,"b":1.0000000000000001e-1}"#);
    }

    #[test]
    fn floats_parse_back_exactly() {
        for x in [0.1, -2.5e-300, 1.0 / 3.0, f64::MAX, f64::MIN_POSITIVE, -0.0] {
            let text = Json::Float(x).compact();
            let back: f64 = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
        }
    }

    #[test]
    fn non_finite_as_strings() {
        assert_eq!(Json::Float(f64::INFINITY).compact(), "\"inf\"");
        assert_eq!(Json::Float(f64::NAN).compact(), "\"nan\"");
    }

    #[test]
    fn pretty_layout() {
        let j = Json::object([("x", Json::Array(vec![Json::Null, Json::from(true)])), ("y", Json::Array(vec![]))]);
        assert_eq!(j.pretty(), "{\n  \"x\": [\n    null,\n    true\n  ],\n  \"y\": []\n}\n");
        assert_eq!(Json::from("a\"b").compact(), r#""a\"b""#);
    }
}
