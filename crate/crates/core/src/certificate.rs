//! Serializable evidence records shared by every verification entry point.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = concat!("ualg ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The stated claim was confirmed.
    Verified,
    /// The computation contradicts the stated claim.
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub parameters: Value,
    pub verdict: Verdict,
    pub evidence: Value,
    pub stats: Value,
    pub tool_version: String,
}

impl Certificate {
    pub fn new(claim: impl Into<String>, parameters: Value, verdict: Verdict, evidence: Value, stats: Value) -> Self {
        Certificate {
            claim: claim.into(),
            parameters,
            verdict,
            evidence,
            stats,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::invalid(format!("certificate JSON: {e}")))
    }

    /// Typed view of a parameter field.
    pub fn param<T: serde::de::DeserializeOwned>(&self, key: &str) -> Result<T> {
        field(&self.parameters, key)
    }

    pub fn evidence_field<T: serde::de::DeserializeOwned>(&self, key: &str) -> Result<T> {
        field(&self.evidence, key)
    }
}

pub fn field<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Result<T> {
    let raw = v
        .get(key)
        .ok_or_else(|| Error::invalid(format!("certificate lacks field `{key}`")))?;
    serde_json::from_value(raw.clone()).map_err(|e| Error::invalid(format!("certificate field `{key}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let c = Certificate::new("demo", json!({"m": 4}), Verdict::Refuted, json!({"pair": [1, 2]}), json!({}));
        let back = Certificate::from_json(&c.to_json_pretty()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.param::<usize>("m").unwrap(), 4);
        assert_eq!(back.evidence_field::<(usize, usize)>("pair").unwrap(), (1, 2));
        assert!(back.param::<usize>("q").is_err());
        assert!(c.to_json_pretty().contains("\"verdict\": \"refuted\""));
    }
}
