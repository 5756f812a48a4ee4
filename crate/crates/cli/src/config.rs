//! Session configuration: a flat TOML document overridden by flags.
//!
//! ```toml
//! p = 2
//! q = 2
//! m = 1
//! modulus = [1, 1, 1]   # optional, low degree first
//! t_exponent = "1"
//! default_tprec = "16"
//! e_mode = "equalchar"  # or "mixed"
//! wprec = 6
//! ```

use std::path::Path;
use std::sync::Arc;

use robba_core::rational::{fmt_q, parse_q, qi};
use robba_core::{Backend, FieldConfig, Ring, RingConfig, Q};
use serde::Deserialize;
use serde_json::{json, Value};

/// A rational given either as an integer or as an `"a/b"` string.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum RawQ {
    Int(i64),
    Text(String),
}

impl RawQ {
    fn to_q(&self, key: &str) -> Result<Q, String> {
        match self {
            RawQ::Int(n) => Ok(qi(*n)),
            RawQ::Text(s) => parse_q(s).ok_or_else(|| format!("{key}: '{s}' is not a rational a/b")),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p: Option<u32>,
    q: Option<u32>,
    m: Option<u32>,
    modulus: Option<Vec<u32>>,
    t_exponent: Option<RawQ>,
    default_tprec: Option<RawQ>,
    e_mode: Option<String>,
    wprec: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionConfig {
    pub p: u32,
    pub q: u32,
    pub m: u32,
    pub modulus: Option<Vec<u32>>,
    pub t_exponent: Q,
    pub default_tprec: Q,
    pub e_mode: Backend,
    pub wprec: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            p: 2,
            q: 2,
            m: 1,
            modulus: None,
            t_exponent: qi(1),
            default_tprec: qi(16),
            e_mode: Backend::EqualChar,
            wprec: 6,
        }
    }
}

/// Flag values that override the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub prec_t: Option<String>,
    pub prec_w: Option<usize>,
    pub backend: Option<String>,
}

pub fn parse_backend(s: &str) -> Result<Backend, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "equalchar" | "equal_char" | "equal" => Ok(Backend::EqualChar),
        "mixed" | "mixedchar" | "mixed_char" => Ok(Backend::MixedCharPTypical),
        other => Err(format!("unknown backend '{other}', expected equalchar or mixed")),
    }
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::EqualChar => "equalchar",
        Backend::MixedCharPTypical => "mixed",
    }
}

impl SessionConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| format!("config: {}", e.message()))?;
        let mut cfg = SessionConfig::default();
        if let Some(p) = raw.p {
            cfg.p = p;
            // q follows p unless given
            cfg.q = raw.q.unwrap_or(p);
        }
        if let Some(q) = raw.q {
            cfg.q = q;
        }
        if let Some(m) = raw.m {
            cfg.m = m;
        }
        cfg.modulus = raw.modulus;
        if let Some(t) = raw.t_exponent {
            cfg.t_exponent = t.to_q("t_exponent")?;
        }
        if let Some(t) = raw.default_tprec {
            cfg.default_tprec = t.to_q("default_tprec")?;
        }
        if let Some(e) = raw.e_mode {
            cfg.e_mode = parse_backend(&e)?;
        }
        if let Some(w) = raw.wprec {
            cfg.wprec = w;
        }
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>, ov: &Overrides) -> Result<Self, String> {
        let mut cfg = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                SessionConfig::from_toml(&text)?
            }
            None => SessionConfig::default(),
        };
        if let Some(t) = &ov.prec_t {
            cfg.default_tprec = parse_q(t).ok_or_else(|| format!("--prec-t: '{t}' is not a rational a/b"))?;
        }
        if let Some(w) = ov.prec_w {
            cfg.wprec = w;
        }
        if let Some(b) = &ov.backend {
            cfg.e_mode = parse_backend(b)?;
        }
        Ok(cfg)
    }

    pub fn field_config(&self) -> FieldConfig {
        FieldConfig {
            p: self.p,
            q: self.q,
            m: self.m,
            modulus: self.modulus.clone(),
            t_exponent: self.t_exponent,
            default_tprec: self.default_tprec,
        }
    }

    /// Validates the configuration by building the ring.
    pub fn build(&self) -> robba_core::error::Result<Arc<Ring>> {
        RingConfig::new(self.field_config(), self.e_mode, self.wprec).build()
    }

    /// The configuration echoed in every response.
    pub fn provenance(&self, ring: Option<&Arc<Ring>>) -> Value {
        let modulus = match (&self.modulus, ring) {
            (Some(m), _) => json!(m),
            (None, Some(r)) => json!(r.field().ff().modulus()),
            (None, None) => Value::Null,
        };
        json!({
            "tool": concat!("robba ", env!("CARGO_PKG_VERSION")),
            "p": self.p,
            "q": self.q,
            "m": self.m,
            "modulus": modulus,
            "t_exponent": fmt_q(&self.t_exponent),
            "default_tprec": fmt_q(&self.default_tprec),
            "e_mode": backend_name(self.e_mode),
            "wprec": self.wprec,
        })
    }
}
