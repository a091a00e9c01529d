//! Report trees with two renderings: canonical JSON and line-oriented text.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use orbicoh_core::exact::{fmt_rational, Cyclotomic, Phase, Rational};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Bool(bool),
    Int(BigInt),
    Frac(Rational),
    Str(String),
    List(Vec<Node>),
    Map(BTreeMap<String, Node>),
}

impl Node {
    pub fn map<K: Into<String>>(entries: impl IntoIterator<Item = (K, Node)>) -> Node {
        Node::Map(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn list(items: impl IntoIterator<Item = Node>) -> Node {
        Node::List(items.into_iter().collect())
    }

    pub fn int(n: impl Into<BigInt>) -> Node {
        Node::Int(n.into())
    }

    pub fn str(s: impl Into<String>) -> Node {
        Node::Str(s.into())
    }

    pub fn frac(q: &Rational) -> Node {
        Node::Frac(q.clone())
    }

    pub fn phase(p: &Phase) -> Node {
        Node::Frac(p.value().clone())
    }

    pub fn indices(items: &[usize]) -> Node {
        Node::list(items.iter().map(|&i| Node::int(i)))
    }

    pub fn point(p: &[Rational]) -> Node {
        Node::list(p.iter().map(Node::frac))
    }

    /// Power-basis coefficients at the element's own level.
    pub fn cyclotomic(x: &Cyclotomic) -> Node {
        Node::map([
            ("level", Node::int(x.level())),
            ("coeffs", Node::list(x.coeffs().iter().map(Node::frac))),
        ])
    }

    pub fn to_json(&self) -> Value {
        fn big(n: &BigInt) -> Value {
            n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
        }
        match self {
            Node::Bool(b) => Value::Bool(*b),
            Node::Int(n) => big(n),
            Node::Frac(q) => Value::Array(vec![big(q.numer()), big(q.denom())]),
            Node::Str(s) => Value::String(s.clone()),
            Node::List(items) => Value::Array(items.iter().map(Node::to_json).collect()),
            Node::Map(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()),
        }
    }

    /// `path = value` lines, maps in key order and lists by index.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_lines("", &mut out);
        out
    }

    fn write_lines(&self, path: &str, out: &mut String) {
        let join = |key: &str| {
            if path.is_empty() {
                key.to_owned()
            } else {
                format!("{path}.{key}")
            }
        };
        let mut leaf = |v: String| {
            out.push_str(path);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        match self {
            Node::Bool(b) => leaf(b.to_string()),
            Node::Int(n) => leaf(n.to_string()),
            Node::Frac(q) => leaf(fmt_rational(q)),
            Node::Str(s) => leaf(s.clone()),
            Node::List(items) if items.is_empty() => leaf("[]".into()),
            Node::Map(m) if m.is_empty() => leaf("{}".into()),
            Node::List(items) => {
                for (i, item) in items.iter().enumerate() {
                    item.write_lines(&join(&i.to_string()), out);
                }
            }
            Node::Map(m) => {
                for (k, v) in m {
                    v.write_lines(&join(k), out);
                }
            }
        }
    }
}

/// Canonical JSON text: keys sorted, two-space indentation, trailing newline.
pub fn to_json_string(node: &Node) -> String {
    let mut s = serde_json::to_string_pretty(&node.to_json()).expect("JSON values serialize");
    s.push('\n');
    s
}
