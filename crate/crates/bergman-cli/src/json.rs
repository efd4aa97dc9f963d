//! JSON wire formats. Complex numbers are always two-element arrays
//! `[re, im]`.

use bergman::classify::{ClassificationReport, ReportFlag, SymmetryCertificate};
use bergman::lebesgue::{ExponentialMonomial, ExponentialSum};
use bergman::operators::{BoundedVerdict, ConjugationSpec};
use bergman::types::{
    HalfPlanePoint, KernelSpan, KernelTerm, MapSymbol, MoebiusMap, SymbolPair, WeightIndex,
    WeightSymbol,
};
use bergman::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub type ComplexJson = [f64; 2];

pub fn complex(v: ComplexJson) -> Complex64 {
    Complex64::new(v[0], v[1])
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct WeightSymbolJson {
    pub kind: String,
    pub c: ComplexJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<ComplexJson>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct MapJson {
    pub a: ComplexJson,
    pub b: ComplexJson,
    pub c: ComplexJson,
    pub d: ComplexJson,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct SymbolPairJson {
    pub ell: u32,
    pub f: WeightSymbolJson,
    pub g: MapJson,
}

impl SymbolPairJson {
    pub fn to_pair(&self) -> Result<SymbolPair, String> {
        let f = match self.f.kind.as_str() {
            "const" => WeightSymbol::constant(complex(self.f.c)),
            "recip" => {
                let a = self.f.a.ok_or("recip weight requires field 'a'")?;
                let b = self.f.b.ok_or("recip weight requires field 'b'")?;
                WeightSymbol::reciprocal_power(complex(self.f.c), complex(a), complex(b))
                    .map_err(|e| e.to_string())?
            }
            other => return Err(format!("unknown weight kind '{other}'")),
        };
        // Determinant-zero coefficient tuples describing constant maps are
        // routed to the constant-map symbol.
        let g = MapSymbol::from_coeffs(
            complex(self.g.a),
            complex(self.g.b),
            complex(self.g.c),
            complex(self.g.d),
        )
        .map_err(|e| e.to_string())?;
        Ok(SymbolPair::new(WeightIndex(self.ell), f, g))
    }
}

pub fn map_to_moebius(m: &MapJson) -> Result<MoebiusMap, String> {
    MoebiusMap::new(complex(m.a), complex(m.b), complex(m.c), complex(m.d))
        .map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(tag = "kind")]
pub enum ConjugationJson {
    Ca { a: f64 },
    Cstar,
    UCstarU { b: ComplexJson, c: f64 },
}

impl ConjugationJson {
    pub fn to_spec(&self) -> Result<ConjugationSpec, String> {
        match self {
            ConjugationJson::Ca { a } => Ok(ConjugationSpec::Ca { a: *a }),
            ConjugationJson::Cstar => Ok(ConjugationSpec::Cstar),
            ConjugationJson::UCstarU { b, c } => {
                ConjugationSpec::ucstaru(complex(*b), *c).map_err(|e| e.to_string())
            }
        }
    }
}

pub fn conjugation_json(spec: &ConjugationSpec) -> Value {
    match spec {
        ConjugationSpec::Ca { a } => json!({"kind": "Ca", "a": a}),
        ConjugationSpec::Cstar => json!({"kind": "Cstar"}),
        ConjugationSpec::UCstarU { b, c } => {
            json!({"kind": "UCstarU", "b": [b.re, b.im], "c": c})
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct SpanTermJson {
    pub coeff: ComplexJson,
    pub point: ComplexJson,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct SpanJson {
    pub ell: u32,
    pub terms: Vec<SpanTermJson>,
}

impl SpanJson {
    pub fn to_span(&self) -> Result<KernelSpan, String> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let point = HalfPlanePoint::new(complex(t.point)).map_err(|e| e.to_string())?;
            terms.push(KernelTerm {
                coeff: complex(t.coeff),
                point,
            });
        }
        Ok(KernelSpan::new(WeightIndex(self.ell), terms))
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ExponentialTermJson {
    pub coeff: ComplexJson,
    pub rate: ComplexJson,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ExponentialSumJson {
    pub ell: u32,
    pub terms: Vec<ExponentialTermJson>,
}

impl ExponentialSumJson {
    pub fn to_sum(&self) -> Result<ExponentialSum, String> {
        ExponentialSum::new(
            WeightIndex(self.ell),
            self.terms
                .iter()
                .map(|t| ExponentialMonomial {
                    coeff: complex(t.coeff),
                    rate: complex(t.rate),
                })
                .collect(),
        )
        .map_err(|e| e.to_string())
    }
}

pub fn span_json(h: &KernelSpan) -> Value {
    json!({
        "ell": h.ell().0,
        "terms": h.terms().iter().map(|t| json!({
            "coeff": complex_json(t.coeff),
            "point": complex_json(t.point.value()),
        })).collect::<Vec<_>>(),
    })
}

pub fn flag_json(flag: &ReportFlag) -> Value {
    Value::String(flag.to_string())
}

pub fn classification_json(report: &ClassificationReport) -> Value {
    json!({
        "family": report.family.as_str(),
        "parameters": report
            .parameters
            .iter()
            .map(|(name, value)| json!({"name": name, "value": complex_json(*value)}))
            .collect::<Vec<_>>(),
        "bounded": report.bounded,
        "certification_residual": report.certification_residual,
        "certification_tolerance": bergman::classify::CERT_TOL,
        "flags": report.flags.iter().map(flag_json).collect::<Vec<_>>(),
    })
}

pub fn bounded_json(verdict: BoundedVerdict) -> Value {
    Value::String(
        match verdict {
            BoundedVerdict::BoundedByLemma => "bounded-by-lemma",
            BoundedVerdict::BoundedByAffine => "bounded-by-affine",
            BoundedVerdict::Unknown => "unknown",
        }
        .into(),
    )
}

pub fn certificate_json(cert: &SymmetryCertificate) -> Value {
    match cert {
        SymmetryCertificate::Conjugation(spec) => conjugation_json(spec),
        SymmetryCertificate::CaForAll => json!({"kind": "CaForAll"}),
    }
}
