//! Versioned JSON artifacts for codes and verification reports.
//!
//! Field elements of `F_ℓ` are written as decimal strings of their canonical
//! integer; base-field elements and polynomial coefficients as plain numbers.
//! The `digest` field holds the SHA-256 of the artifact rendered with an
//! empty digest.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::construct::{check_shape, CodeForm, GroupFunctions, LrcParams, MrLrcCode};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf::{ExtFieldCtx, FieldCtx, Fq};
use crate::innercodes::{FamilyRoute, IndependentFamily};
use crate::linalg::Matrix;
use crate::polyring::{CoprimeFamily, Poly};
use crate::verify::VerifyReport;

pub const CODE_FORMAT: &str = "mrlrc-code";
pub const REPORT_FORMAT: &str = "mrlrc-report";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub route: FamilyRoute,
    pub m: usize,
    pub r: usize,
    pub strength: usize,
    pub columns: Vec<Vec<Fq>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub denominator: String,
    pub numerators: Vec<String>,
    pub evaluations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeArtifact {
    pub format: String,
    pub version: u32,
    pub params: LrcParams,
    pub form: CodeForm,
    pub route: String,
    pub p: u32,
    pub t: u32,
    /// Coefficients of the base-field modulus over `F_p`, low to high.
    pub base_modulus: Vec<u32>,
    /// `Q(x)` over `F_q`, comma-separated, low to high.
    pub extension_modulus: String,
    pub coprime: Option<Vec<String>>,
    pub family: Option<FamilyRecord>,
    pub a_block: Vec<Vec<Fq>>,
    pub matrix: Vec<Vec<String>>,
    pub groups: Vec<GroupRecord>,
    pub digest: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

impl CodeArtifact {
    pub fn from_code(code: &MrLrcCode) -> Self {
        let ext = &code.ext;
        let mut art = CodeArtifact {
            format: CODE_FORMAT.into(),
            version: VERSION,
            params: code.params,
            form: code.form,
            route: code.route.clone(),
            p: code.base.characteristic(),
            t: code.base.degree(),
            base_modulus: code.base.modulus().to_vec(),
            extension_modulus: ext.modulus().to_string(),
            coprime: code.coprime.as_ref().map(|c| c.members.iter().map(|p| p.to_string()).collect()),
            family: code.family.as_ref().map(|f| FamilyRecord {
                route: f.route,
                m: f.m,
                r: f.r,
                strength: f.s,
                columns: f.columns.clone(),
            }),
            a_block: code.a_block.to_rows(),
            matrix: code.matrix.to_rows().iter().map(|row| row.iter().map(|e| ext.encode_str(e)).collect()).collect(),
            groups: code
                .groups
                .iter()
                .map(|g| GroupRecord {
                    denominator: g.denominator.to_string(),
                    numerators: g.numerators.iter().map(|p| p.to_string()).collect(),
                    evaluations: g.evaluations.iter().map(|e| ext.encode_str(e)).collect(),
                })
                .collect(),
            digest: String::new(),
        };
        art.digest = art.compute_digest();
        art
    }

    pub fn compute_digest(&self) -> String {
        let blank = CodeArtifact { digest: String::new(), ..self.clone() };
        sha256_hex(serde_json::to_string(&blank).expect("artifact serializes").as_bytes())
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serializes") + "\n"
    }

    /// Parses and checks the digest unless `force` is set.
    pub fn parse(text: &str, force: bool) -> Result<Self> {
        let art: CodeArtifact = serde_json::from_str(text).map_err(json_err)?;
        if art.format != CODE_FORMAT {
            return Err(Error::Parse(format!("unexpected format {:?}", art.format)));
        }
        if art.version != VERSION {
            return Err(Error::Parse(format!("unsupported version {}", art.version)));
        }
        let found = art.compute_digest();
        if !force && found != art.digest {
            return Err(Error::DigestMismatch { expected: art.digest.clone(), found });
        }
        Ok(art)
    }

    /// Rebuilds the code from the stored data, validating shapes and fields.
    pub fn to_code(&self) -> Result<MrLrcCode> {
        let params = self.params;
        let g = check_shape(params.n, params.r, params.h, params.a)?;
        if g != params.g {
            return Err(Error::Parse(format!("group count {} does not match n/r = {g}", params.g)));
        }
        let base = Arc::new(FieldCtx::new(self.p, self.t)?);
        if base.order() != params.q {
            return Err(Error::Parse(format!("q = {} but p^t = {}", params.q, base.order())));
        }
        if base.modulus() != self.base_modulus.as_slice() {
            return Err(Error::Parse("base modulus is not the canonical one".into()));
        }
        let poly = |s: &str| -> Result<Poly> {
            let p = Poly::parse(s)?;
            p.check_in(&base)?;
            Ok(p)
        };
        let ext = Arc::new(ExtFieldCtx::new(base.clone(), poly(&self.extension_modulus)?)?);

        let rows = match self.form {
            CodeForm::Parity => g * params.a + params.h,
            CodeForm::Generator => params.k(),
        };
        if self.matrix.len() != rows || self.matrix.iter().any(|row| row.len() != params.n) {
            return Err(Error::Dimension(format!("matrix must be {rows} x {}", params.n)));
        }
        let decoded = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| ext.decode_str(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let matrix = if rows == 0 { Matrix::filled(0, params.n, ext.zero()) } else { Matrix::from_rows(decoded)? };

        let a_rows = match self.form {
            CodeForm::Parity => params.a,
            CodeForm::Generator => 0,
        };
        if self.a_block.len() != a_rows
            || self.a_block.iter().any(|row| row.len() != params.r || row.iter().any(|&c| !base.contains(c)))
        {
            return Err(Error::Dimension(format!("local block must be {a_rows} x {} over F_q", params.r)));
        }
        let a_block =
            if a_rows == 0 { Matrix::filled(0, params.r, 0) } else { Matrix::from_rows(self.a_block.clone())? };

        let coprime = match &self.coprime {
            Some(members) => Some(CoprimeFamily {
                m: params.m,
                members: members.iter().map(|s| poly(s)).collect::<Result<Vec<_>>>()?,
            }),
            None => None,
        };
        let family = match &self.family {
            Some(f) => {
                if f.columns.iter().any(|c| c.len() != f.m || c.iter().any(|&x| !base.contains(x))) {
                    return Err(Error::Dimension("family columns must lie in F_q^m".into()));
                }
                Some(IndependentFamily {
                    ctx: base.clone(),
                    m: f.m,
                    r: f.r,
                    s: f.strength,
                    columns: f.columns.clone(),
                    route: f.route,
                })
            }
            None => None,
        };
        let groups = self
            .groups
            .iter()
            .map(|g| {
                Ok(GroupFunctions {
                    denominator: poly(&g.denominator)?,
                    numerators: g.numerators.iter().map(|s| poly(s)).collect::<Result<Vec<_>>>()?,
                    evaluations: g.evaluations.iter().map(|s| ext.decode_str(s)).collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(MrLrcCode {
            params,
            form: self.form,
            route: self.route.clone(),
            base,
            ext,
            matrix,
            a_block,
            coprime,
            family,
            groups,
        })
    }
}

pub fn render_code(code: &MrLrcCode) -> String {
    CodeArtifact::from_code(code).render()
}

pub fn parse_code(text: &str, force: bool) -> Result<MrLrcCode> {
    CodeArtifact::parse(text, force)?.to_code()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportArtifact {
    pub format: String,
    pub version: u32,
    /// Digest of the code artifact that was checked.
    pub code_digest: String,
    pub params: LrcParams,
    pub form: CodeForm,
    pub passed: bool,
    pub report: VerifyReport,
}

impl ReportArtifact {
    pub fn new(code: &CodeArtifact, report: VerifyReport) -> Self {
        ReportArtifact {
            format: REPORT_FORMAT.into(),
            version: VERSION,
            code_digest: code.digest.clone(),
            params: code.params,
            form: code.form,
            passed: report.passed(),
            report,
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self> {
        let rep: ReportArtifact = serde_json::from_str(text).map_err(json_err)?;
        if rep.format != REPORT_FORMAT || rep.version != VERSION {
            return Err(Error::Parse(format!("unexpected report format {:?} v{}", rep.format, rep.version)));
        }
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{construct, Route};
    use crate::verify::{check_mr, VerifyOptions};

    fn sample(form: CodeForm) -> MrLrcCode {
        let (n, r, h, a) = match form {
            CodeForm::Parity => (8, 4, 2, 1),
            CodeForm::Generator => (8, 4, 1, 1),
        };
        construct(n, r, h, a, &Route::Manual { q: None, m: None, form }).unwrap()
    }

    #[test]
    fn round_trip_both_forms() {
        for form in [CodeForm::Parity, CodeForm::Generator] {
            let code = sample(form);
            let text = render_code(&code);
            let back = parse_code(&text, false).unwrap();
            assert_eq!(back.params, code.params);
            assert_eq!(back.matrix, code.matrix);
            assert_eq!(back.a_block, code.a_block);
            assert_eq!(back.groups, code.groups);
            assert_eq!(back.coprime, code.coprime);
            assert_eq!(back.ext.modulus(), code.ext.modulus());
            assert_eq!(render_code(&back), text);
        }
    }

    #[test]
    fn locals_only_round_trip() {
        let code = construct(8, 4, 0, 1, &Route::Manual { q: None, m: None, form: CodeForm::Parity }).unwrap();
        let back = parse_code(&render_code(&code), false).unwrap();
        assert_eq!(back.matrix, code.matrix);
        assert!(back.coprime.is_none());
    }

    #[test]
    fn rendering_is_deterministic() {
        assert_eq!(render_code(&sample(CodeForm::Parity)), render_code(&sample(CodeForm::Parity)));
    }

    #[test]
    fn tampering_is_detected() {
        let code = sample(CodeForm::Parity);
        let mut art = CodeArtifact::from_code(&code);
        art.matrix[2][0] = "0".into();
        let text = art.render();
        assert!(matches!(parse_code(&text, false), Err(Error::DigestMismatch { .. })));
        let forced = parse_code(&text, true).unwrap();
        assert!(forced.ext.is_zero(forced.matrix.get(2, 0)));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_code("{", false), Err(Error::Parse(_))));
        let mut art = CodeArtifact::from_code(&sample(CodeForm::Parity));
        art.matrix.pop();
        art.digest = art.compute_digest();
        assert!(matches!(art.to_code(), Err(Error::Dimension(_))));
        let mut art = CodeArtifact::from_code(&sample(CodeForm::Parity));
        art.version = 9;
        art.digest = art.compute_digest();
        assert!(CodeArtifact::parse(&art.render(), false).is_err());
        let mut art = CodeArtifact::from_code(&sample(CodeForm::Parity));
        art.extension_modulus = "1,1,1,1".into();
        assert!(art.to_code().is_err());
    }

    #[test]
    fn report_round_trip() {
        let code = sample(CodeForm::Parity);
        let art = CodeArtifact::from_code(&code);
        let report = check_mr(&code, &VerifyOptions::exhaustive()).unwrap();
        let rep = ReportArtifact::new(&art, report);
        let back = ReportArtifact::parse(&rep.render()).unwrap();
        assert_eq!(back, rep);
        assert!(back.passed);
        assert_eq!(back.code_digest, art.digest);
    }
}
