//! JSON forms:
//!
//! ```text
//! sparse: {"d": 2, "terms": [{"word": [1, -2], "re": 1.0, "im": 0.0}, ...]}
//! radial: {"d": 2, "coeffs": [[1.0, 0.0], [0.5, 0.0]], "log_scale": 0.0}
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{RadialFunction, SparseFunction};
use crate::error::{Error, Result};
use crate::words::{GroupContext, Word};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub word: Vec<i64>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub d: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialDoc {
    pub d: usize,
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    pub log_scale: f64,
}

/// Either form, as read from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedFunction {
    Sparse(SparseFunction),
    Radial(RadialFunction),
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

fn context(d: usize) -> Result<GroupContext> {
    GroupContext::new(d).map_err(|e| Error::Parse {
        location: "d".into(),
        message: e.to_string(),
    })
}

impl SparseFunction {
    pub fn to_doc(&self) -> FunctionDoc {
        FunctionDoc {
            d: self.ctx().rank(),
            terms: self
                .terms()
                .map(|(w, c)| TermDoc {
                    word: w.to_signed(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    /// Validates letters and reduces every word.
    pub fn from_doc(doc: &FunctionDoc) -> Result<Self> {
        let ctx = context(doc.d)?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (i, t) in doc.terms.iter().enumerate() {
            for (j, &x) in t.word.iter().enumerate() {
                ctx.check_letter(x).map_err(|e| Error::Parse {
                    location: format!("terms[{i}].word[{j}]"),
                    message: e.to_string(),
                })?;
            }
            if !t.re.is_finite() || !t.im.is_finite() {
                return Err(Error::Parse {
                    location: format!("terms[{i}]"),
                    message: "coefficient must be finite".into(),
                });
            }
            terms.push((Word::reduce(&ctx, &t.word)?, Complex64::new(t.re, t.im)));
        }
        Ok(SparseFunction::from_terms(&ctx, terms))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(text).map_err(parse_error)?)
    }
}

impl RadialFunction {
    pub fn to_doc(&self) -> RadialDoc {
        let (coeffs, log_scale) = self.to_coeffs();
        RadialDoc {
            d: self.ctx().rank(),
            coeffs: coeffs.iter().map(|c| [c.re, c.im]).collect(),
            log_scale,
        }
    }

    pub fn from_doc(doc: &RadialDoc) -> Result<Self> {
        let ctx = context(doc.d)?;
        if doc.coeffs.is_empty() {
            return Err(Error::Parse {
                location: "coeffs".into(),
                message: "at least one coefficient is required".into(),
            });
        }
        let coeffs: Vec<Complex64> = doc
            .coeffs
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        RadialFunction::from_coeffs(&ctx, &coeffs, doc.log_scale)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(&serde_json::from_str(text).map_err(parse_error)?)
    }
}

/// Reads either JSON form, choosing by the presence of `terms` or `coeffs`.
pub fn parse_function_json(text: &str) -> Result<LoadedFunction> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
    let obj = value.as_object().ok_or_else(|| Error::Parse {
        location: "root".into(),
        message: "expected a JSON object".into(),
    })?;
    if obj.contains_key("terms") {
        let doc: FunctionDoc = serde_json::from_value(value).map_err(parse_error)?;
        Ok(LoadedFunction::Sparse(SparseFunction::from_doc(&doc)?))
    } else if obj.contains_key("coeffs") {
        let doc: RadialDoc = serde_json::from_value(value).map_err(parse_error)?;
        Ok(LoadedFunction::Radial(RadialFunction::from_doc(&doc)?))
    } else {
        Err(Error::Parse {
            location: "root".into(),
            message: "expected a \"terms\" or \"coeffs\" field".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn loads_examples() {
        let f = parse_function_json(r#"{"d":2,"terms":[{"word":[1],"re":1,"im":0}]}"#).unwrap();
        let ctx = GroupContext::new(2).unwrap();
        assert_eq!(
            f,
            LoadedFunction::Sparse(SparseFunction::delta(&ctx, Word::parse(&ctx, "a").unwrap()))
        );
        let r = parse_function_json(r#"{"d":2,"coeffs":[[1,0],[0.5,0]]}"#).unwrap();
        match r {
            LoadedFunction::Radial(r) => {
                assert_eq!(r.coeff(0), Complex64::new(1.0, 0.0));
                assert_eq!(r.coeff(1), Complex64::new(0.5, 0.0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_invalid_letter_with_location() {
        let err =
            parse_function_json(r#"{"d":2,"terms":[{"word":[0],"re":1,"im":0}]}"#).unwrap_err();
        match err {
            Error::Parse { location, .. } => assert_eq!(location, "terms[0].word[0]"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_function_json("{\"d\":2,"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_function_json(r#"{"d":1,"terms":[]}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn unreduced_words_are_reduced_on_load() {
        let f = SparseFunction::from_json(r#"{"d":2,"terms":[{"word":[1,2,-2],"re":2,"im":0}]}"#)
            .unwrap();
        assert_eq!(f.terms().next().unwrap().0.to_signed(), vec![1]);
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
    }

    fn moderate() -> impl Strategy<Value = f64> {
        prop_oneof![Just(0.0), (-1e100f64..1e100), (-1e-100f64..1e-100)]
    }

    proptest! {
        #[test]
        fn sparse_json_round_trip_is_lossless(
            terms in prop::collection::vec((prop::collection::vec(prop::sample::select(vec![1i64, -1, 2, -2]), 0..6), finite(), finite()), 0..12)
        ) {
            let ctx = GroupContext::new(2).unwrap();
            let f = SparseFunction::from_terms(&ctx, terms.iter().map(|(w, re, im)| {
                (Word::reduce(&ctx, w).unwrap(), Complex64::new(*re, *im))
            }));
            let text = f.to_json();
            let back = SparseFunction::from_json(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_json(), text);
        }

        #[test]
        fn radial_json_round_trip_is_lossless(
            coeffs in prop::collection::vec((moderate(), moderate()), 1..10),
            log_scale in -1e3f64..1e3,
        ) {
            let mut coeffs: Vec<[f64; 2]> = coeffs.iter().map(|&(a, b)| [a, b]).collect();
            coeffs.push([1.0, -0.5]);
            let doc = RadialDoc { d: 3, coeffs, log_scale };
            let r = RadialFunction::from_doc(&doc).unwrap();
            prop_assert_eq!(r.to_doc(), doc);
            let text = r.to_json();
            prop_assert_eq!(RadialFunction::from_json(&text).unwrap().to_json(), text);
        }
    }
}
