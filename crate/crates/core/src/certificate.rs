//! Self-contained JSON certificates: the input, its digest, and one proof
//! object. [`verify`] re-checks a parsed certificate from scratch.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::butterfly::ButterflyTrace;
use crate::coloring::{chromatic_number, is_k_dicolorable, AcyclicColoring};
use crate::decomposition::DecompositionCertificate;
use crate::digraph::Digraph;
use crate::error::{invalid, Error, Result};
use crate::generate::bidirected_complete;
use crate::io::write_digraph;
use crate::iso::are_isomorphic;
use crate::strong_minor::StrongMinorModel;
use crate::subdivision::SubdivisionEmbedding;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Minimality of a dicolouring (no colouring with one colour fewer) is
/// re-proved exhaustively up to this order.
pub const MINIMALITY_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateInput {
    pub digraph: Digraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Digraph>,
}

impl CertificateInput {
    pub fn digraph(d: &Digraph) -> Self {
        CertificateInput { digraph: d.clone(), pattern: None }
    }

    /// Hex SHA-256 of the edge-list rendering of the digraph, followed by the
    /// pattern's when present.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(write_digraph(&self.digraph));
        if let Some(p) = &self.pattern {
            h.update(b"--\n");
            h.update(write_digraph(p));
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Certificate {
    Dicoloring { dichromatic_number: usize, coloring: AcyclicColoring },
    Decomposition(DecompositionCertificate),
    /// A strong model of the bidirected complete digraph on `t` vertices.
    StrongModel { t: usize, model: StrongMinorModel },
    /// Butterfly contraction sequence ending in the bidirected complete digraph on `t` vertices.
    ButterflyTrace { t: usize, trace: ButterflyTrace },
    Subdivision(SubdivisionEmbedding),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Dicoloring { .. } => "dicoloring",
            Certificate::Decomposition(_) => "decomposition",
            Certificate::StrongModel { .. } => "strong-model",
            Certificate::ButterflyTrace { .. } => "butterfly-trace",
            Certificate::Subdivision(_) => "subdivision",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub tool_version: String,
    pub input_digest: String,
    pub input: CertificateInput,
    pub certificate: Certificate,
}

impl CertificateDocument {
    pub fn new(input: CertificateInput, certificate: Certificate) -> Self {
        CertificateDocument {
            tool_version: TOOL_VERSION.to_string(),
            input_digest: input.digest(),
            input,
            certificate,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

/// Re-checks the digest and every invariant of the proof object against the
/// embedded input.
pub fn verify(doc: &CertificateDocument) -> Result<()> {
    if doc.input.digest() != doc.input_digest {
        return invalid("input digest does not match the embedded input");
    }
    let d = &doc.input.digraph;
    let needs_pattern = matches!(doc.certificate, Certificate::Subdivision(_));
    if doc.input.pattern.is_some() != needs_pattern {
        return invalid("pattern present for the wrong kind of certificate");
    }
    match &doc.certificate {
        Certificate::Dicoloring { dichromatic_number: k, coloring } => {
            if coloring.colors.len() != d.n() || coloring.k != *k || !coloring.is_valid_for(d) {
                return invalid("colouring is not an acyclic colouring with the stated number of colours");
            }
            if coloring.colors_used() != *k {
                return invalid("colouring does not use every stated colour");
            }
            if *k > 1 && d.n() <= MINIMALITY_LIMIT && is_k_dicolorable(d, k - 1)?.is_some() {
                return invalid(format!("digraph is {}-dicolourable", k - 1));
            }
            Ok(())
        }
        Certificate::Decomposition(cert) => {
            cert.check(d)?;
            if cert.quotient.n() <= MINIMALITY_LIMIT
                && chromatic_number(&cert.quotient)?.0 != cert.quotient_coloring.k
            {
                return invalid("quotient colouring is not optimal");
            }
            Ok(())
        }
        Certificate::StrongModel { t, model } => {
            if model.host != *d {
                return invalid("model host differs from the input");
            }
            if model.pattern != bidirected_complete(*t) {
                return invalid("model pattern is not the bidirected complete digraph");
            }
            model.check(false)
        }
        Certificate::ButterflyTrace { t, trace } => {
            if trace.initial != *d {
                return invalid("trace starts from a different digraph");
            }
            trace.check()?;
            if are_isomorphic(&trace.result, &bidirected_complete(*t)).is_none() {
                return invalid("trace does not end in the bidirected complete digraph");
            }
            Ok(())
        }
        Certificate::Subdivision(emb) => {
            if emb.host != *d || Some(&emb.pattern) != doc.input.pattern.as_ref() {
                return invalid("embedding refers to different digraphs than the input");
            }
            emb.check()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::dichromatic_number;
    use crate::generate::directed_cycle;

    #[test]
    fn dicoloring_round_trip() {
        let d = directed_cycle(5).unwrap();
        let (k, coloring) = dichromatic_number(&d).unwrap();
        let doc = CertificateDocument::new(
            CertificateInput::digraph(&d),
            Certificate::Dicoloring { dichromatic_number: k, coloring },
        );
        let back = CertificateDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        verify(&back).unwrap();
        assert!(doc.to_json().contains("\"kind\": \"dicoloring\""));
    }

    #[test]
    fn tampering_detected() {
        let d = directed_cycle(3).unwrap();
        let (k, coloring) = dichromatic_number(&d).unwrap();
        let mut doc = CertificateDocument::new(
            CertificateInput::digraph(&d),
            Certificate::Dicoloring { dichromatic_number: k, coloring },
        );
        if let Certificate::Dicoloring { coloring, .. } = &mut doc.certificate {
            coloring.colors = vec![0, 0, 0];
        }
        assert!(verify(&doc).is_err());
        let mut doc2 = doc.clone();
        doc2.input_digest = "00".into();
        assert!(verify(&doc2).is_err());
    }

    #[test]
    fn non_minimal_coloring_rejected() {
        let d = directed_cycle(3).unwrap();
        let coloring = AcyclicColoring { k: 3, colors: vec![0, 1, 2] };
        let doc = CertificateDocument::new(
            CertificateInput::digraph(&d),
            Certificate::Dicoloring { dichromatic_number: 3, coloring },
        );
        assert!(verify(&doc).is_err());
    }
}
