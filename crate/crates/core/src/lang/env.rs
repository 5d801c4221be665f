//! Values, variable environments and test cases.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ast::Type;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Bool(bool),
}

impl Value {
    pub fn ty(self) -> Type {
        match self {
            Value::Int(_) => Type::Int,
            Value::Bool(_) => Type::Bool,
        }
    }

    pub fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(v),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Int(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

/// Mapping from variable names to values, ordered by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VariableEnvironment {
    bindings: BTreeMap<String, Value>,
}

impl VariableEnvironment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.bindings.get(name).copied()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<Value>) -> Option<Value> {
        self.bindings.insert(name.into(), value.into())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Value)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    /// Keeps only the bindings whose names satisfy `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&str) -> bool) -> VariableEnvironment {
        self.iter().filter(|(k, _)| keep(k)).collect()
    }
}

impl<K: Into<String>, V: Into<Value>> FromIterator<(K, V)> for VariableEnvironment {
    fn from_iter<I: IntoIterator<Item = (K, V)>>(iter: I) -> Self {
        VariableEnvironment { bindings: iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect() }
    }
}

impl fmt::Display for VariableEnvironment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}

/// An input environment together with the expected (possibly partial) output.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub input: VariableEnvironment,
    #[serde(default)]
    pub expected: VariableEnvironment,
}

impl TestCase {
    pub fn new(input: VariableEnvironment, expected: VariableEnvironment) -> Self {
        TestCase { input, expected }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestOutcome {
    Passing,
    Failing,
}

#[macro_export]
/// Builds a [`VariableEnvironment`](crate::lang::VariableEnvironment) from `name: value` pairs.
macro_rules! env {
    () => { $crate::lang::VariableEnvironment::new() };
    ($($name:ident : $value:expr),+ $(,)?) => {{
        let mut env = $crate::lang::VariableEnvironment::new();
        $( env.insert(stringify!($name), $value); )+
        env
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn environments_serialize_as_plain_objects() {
        let env = crate::env! { b: 3, a: 2, ok: true };
        assert_eq!(serde_json::to_string(&env).unwrap(), r#"{"a":2,"b":3,"ok":true}"#);
        let back: VariableEnvironment = serde_json::from_str(r#"{"a":2,"b":3,"ok":true}"#).unwrap();
        assert_eq!(back, env);
        assert_eq!(env.to_string(), "{a: 2, b: 3, ok: true}");
    }

    #[test]
    fn test_case_expected_defaults_to_empty() {
        let tc: TestCase = serde_json::from_str(r#"{"input":{"a":1}}"#).unwrap();
        assert!(tc.expected.is_empty());
    }
}
