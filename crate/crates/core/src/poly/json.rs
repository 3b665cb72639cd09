//! Polynomial interchange format:
//!
//! ```json
//! {"N": 2, "m": 2, "terms": [{"alpha": [1, 1], "re": 1.0, "im": 0.0}]}
//! ```
//!
//! `m: null` marks a non-homogeneous (analytic) polynomial.

use super::{AnalyticPolynomial, HomogeneousPolynomial, Polynomial};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDocument {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDocument {
    #[serde(rename = "N")]
    pub n: usize,
    pub m: Option<u32>,
    pub terms: Vec<TermDocument>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyPolynomial {
    Homogeneous(HomogeneousPolynomial),
    Analytic(AnalyticPolynomial),
}

impl AnyPolynomial {
    pub fn as_analytic(&self) -> AnalyticPolynomial {
        match self {
            AnyPolynomial::Homogeneous(p) => p.to_analytic(),
            AnyPolynomial::Analytic(f) => f.clone(),
        }
    }

    pub fn to_document(&self) -> PolyDocument {
        match self {
            AnyPolynomial::Homogeneous(p) => p.to_document(),
            AnyPolynomial::Analytic(f) => f.to_document(),
        }
    }

    pub fn from_document(doc: &PolyDocument) -> Result<Self> {
        let terms = doc_terms(doc)?;
        Ok(match doc.m {
            Some(m) => AnyPolynomial::Homogeneous(HomogeneousPolynomial::from_terms(doc.n, m, terms)?),
            None => AnyPolynomial::Analytic(AnalyticPolynomial::from_terms(doc.n, terms)?),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PolyDocument = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("finite document serializes")
    }
}

fn doc_terms(doc: &PolyDocument) -> Result<Vec<(MultiIndex, Complex64)>> {
    doc.terms
        .iter()
        .map(|t| {
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Format(format!("non-finite coefficient at {:?}", t.alpha)));
            }
            Ok((MultiIndex::new(t.alpha.clone()), Complex64::new(t.re, t.im)))
        })
        .collect()
}

fn term_docs(p: &impl Polynomial) -> Vec<TermDocument> {
    p.terms()
        .iter()
        .map(|(a, c)| TermDocument {
            alpha: a.exponents().to_vec(),
            re: c.re,
            im: c.im,
        })
        .collect()
}

impl HomogeneousPolynomial {
    pub fn to_document(&self) -> PolyDocument {
        PolyDocument {
            n: self.dimension(),
            m: Some(self.degree()),
            terms: term_docs(self),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("finite document serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        match AnyPolynomial::from_json(s)? {
            AnyPolynomial::Homogeneous(p) => Ok(p),
            AnyPolynomial::Analytic(_) => Err(Error::Format("expected an integer degree \"m\"".into())),
        }
    }
}

impl AnalyticPolynomial {
    pub fn to_document(&self) -> PolyDocument {
        PolyDocument {
            n: self.dimension(),
            m: None,
            terms: term_docs(self),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("finite document serializes")
    }

    /// Accepts both homogeneous and analytic documents.
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(AnyPolynomial::from_json(s)?.as_analytic())
    }
}
