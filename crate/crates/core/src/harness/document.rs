//! JSON set documents with rationals as `"p/q"` strings.
//!
//! ```json
//! {"kind":"cellset","dimension":2,"resolution":"1/2","cells":[[0,0],[1,0]]}
//! {"kind":"boxunion","dimension":1,"boxes":[{"min":["0"],"max":["3/2"]}]}
//! {"kind":"shape","dimension":2,"shape":{"type":"ball","center":["0","0"],"radius":"1"}}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BoxUnion, CellSet, RatBox};
use crate::pixellation::Shape;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetDocument {
    Cells(CellSet),
    Boxes(BoxUnion),
    Shape(Shape),
}

impl SetDocument {
    pub fn dimension(&self) -> usize {
        match self {
            SetDocument::Cells(c) => c.dimension(),
            SetDocument::Boxes(b) => b.dimension(),
            SetDocument::Shape(s) => s.dimension(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawDocument {
    Cellset {
        dimension: usize,
        resolution: String,
        cells: Vec<Vec<i64>>,
    },
    Boxunion {
        dimension: usize,
        boxes: Vec<RawBox>,
    },
    Shape {
        dimension: usize,
        shape: RawShape,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    min: Vec<String>,
    max: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawShape {
    Ball { center: Vec<String>, radius: String },
    Boxes { boxes: Vec<RawBox> },
}

fn field_error(location: impl Into<String>, message: impl ToString) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.to_string(),
    }
}

fn parse_field(text: &str, location: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| field_error(location, e))
}

fn parse_vector(values: &[String], dimension: usize, location: &str) -> Result<Vec<Rational>> {
    if values.len() != dimension {
        return Err(field_error(
            location,
            format!("expected {dimension} coordinates, found {}", values.len()),
        ));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| parse_field(v, &format!("{location}[{i}]")))
        .collect()
}

fn parse_boxes(raw: &[RawBox], dimension: usize, location: &str) -> Result<BoxUnion> {
    let mut boxes = Vec::with_capacity(raw.len());
    for (i, b) in raw.iter().enumerate() {
        let at = format!("{location}[{i}]");
        let min = parse_vector(&b.min, dimension, &format!("{at}.min"))?;
        let max = parse_vector(&b.max, dimension, &format!("{at}.max"))?;
        boxes.push(RatBox::new(min, max).map_err(|e| field_error(at, e))?);
    }
    BoxUnion::new(dimension, boxes)
}

fn print_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn print_boxes(u: &BoxUnion) -> Vec<RawBox> {
    u.boxes()
        .iter()
        .map(|b| RawBox {
            min: print_vector(b.min()),
            max: print_vector(b.max()),
        })
        .collect()
}

/// Parses a document. Duplicate cells, coordinate-count mismatches and zero
/// denominators are rejected with the offending field in the error.
pub fn parse_set(text: &str) -> Result<SetDocument> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
        field_error(format!("line {}, column {}", e.line(), e.column()), e)
    })?;
    match raw {
        RawDocument::Cellset {
            dimension,
            resolution,
            cells,
        } => {
            let lambda = parse_field(&resolution, "resolution")?;
            let mut out = CellSet::new(dimension, lambda).map_err(|e| field_error("resolution", e))?;
            for (i, c) in cells.into_iter().enumerate() {
                if c.len() != dimension {
                    return Err(field_error(
                        format!("cells[{i}]"),
                        format!("expected {dimension} coordinates, found {}", c.len()),
                    ));
                }
                if !out.insert(c.clone())? {
                    return Err(field_error(format!("cells[{i}]"), Error::DuplicateCell(c)));
                }
            }
            Ok(SetDocument::Cells(out))
        }
        RawDocument::Boxunion { dimension, boxes } => Ok(SetDocument::Boxes(parse_boxes(&boxes, dimension, "boxes")?)),
        RawDocument::Shape { dimension, shape } => match shape {
            RawShape::Ball { center, radius } => {
                let center = parse_vector(&center, dimension, "shape.center")?;
                let radius = parse_field(&radius, "shape.radius")?;
                Ok(SetDocument::Shape(
                    Shape::ball(center, radius).map_err(|e| field_error("shape.radius", e))?,
                ))
            }
            RawShape::Boxes { boxes } => Ok(SetDocument::Shape(Shape::Boxes(parse_boxes(
                &boxes,
                dimension,
                "shape.boxes",
            )?))),
        },
    }
}

/// Canonical text: sorted cells, reduced fractions, one line.
pub fn print_set(doc: &SetDocument) -> String {
    let raw = match doc {
        SetDocument::Cells(c) => RawDocument::Cellset {
            dimension: c.dimension(),
            resolution: format_rational(c.resolution()),
            cells: c.iter().cloned().collect(),
        },
        SetDocument::Boxes(u) => RawDocument::Boxunion {
            dimension: u.dimension(),
            boxes: print_boxes(u),
        },
        SetDocument::Shape(s) => RawDocument::Shape {
            dimension: s.dimension(),
            shape: match s {
                Shape::Ball { center, radius } => RawShape::Ball {
                    center: print_vector(center),
                    radius: format_rational(radius),
                },
                Shape::Boxes(u) => RawShape::Boxes { boxes: print_boxes(u) },
            },
        },
    };
    serde_json::to_string(&raw).expect("documents serialize")
}

/// Shorthand for the cell-set case.
pub fn cellset_document(x: &CellSet) -> String {
    print_set(&SetDocument::Cells(x.clone()))
}

pub fn expect_cellset(doc: SetDocument) -> Result<CellSet> {
    match doc {
        SetDocument::Cells(c) => Ok(c),
        _ => Err(field_error("kind", "expected a cellset document")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn minimal_cellset() {
        let doc = parse_set(r#"{"kind":"cellset","dimension":2,"resolution":"1","cells":[[0,0]]}"#).unwrap();
        let SetDocument::Cells(c) = doc else { panic!() };
        assert_eq!(c.len(), 1);
        assert_eq!(c.resolution(), &rat(1));
    }

    #[test]
    fn canonical_form() {
        let text = r#"{"kind":"cellset","dimension":2,"resolution":"2/4","cells":[[1,0],[0,0]]}"#;
        let printed = print_set(&parse_set(text).unwrap());
        assert_eq!(printed, r#"{"kind":"cellset","dimension":2,"resolution":"1/2","cells":[[0,0],[1,0]]}"#);
        assert_eq!(print_set(&parse_set(&printed).unwrap()), printed);
    }

    #[test]
    fn box_and_shape_documents() {
        let text = r#"{"kind":"boxunion","dimension":1,"boxes":[{"min":["0"],"max":["6/4"]}]}"#;
        let SetDocument::Boxes(u) = parse_set(text).unwrap() else { panic!() };
        assert_eq!(u.boxes()[0].max(), &[ratio(3, 2)]);
        let text = r#"{"kind":"shape","dimension":2,"shape":{"type":"ball","center":["0","1/3"],"radius":"1"}}"#;
        let doc = parse_set(text).unwrap();
        assert_eq!(print_set(&doc), text);
    }

    #[test]
    fn rejects_malformed() {
        let bad = [
            r#"{"kind":"cellset","dimension":2,"resolution":"1/0","cells":[]}"#,
            r#"{"kind":"cellset","dimension":2,"resolution":"1","cells":[[0,0],[0,0]]}"#,
            r#"{"kind":"cellset","dimension":2,"resolution":"1","cells":[[0,0,0]]}"#,
            r#"{"kind":"cellset","dimension":2,"resolution":"0","cells":[]}"#,
            r#"{"kind":"boxunion","dimension":1,"boxes":[{"min":["1"],"max":["0"]}]}"#,
            r#"{"kind":"shape","dimension":1,"shape":{"type":"ball","center":["0"],"radius":"-1"}}"#,
            r#"{"kind":"cellset","dimension":2}"#,
            r#"{"kind":"cellset","dimension":1,"resolution":"1","cells":[],"extra":1}"#,
            "not json",
        ];
        for text in bad {
            assert!(matches!(parse_set(text), Err(Error::Parse { .. })), "{text}");
        }
    }

    #[test]
    fn error_names_the_field() {
        let err = parse_set(r#"{"kind":"cellset","dimension":2,"resolution":"1","cells":[[0,0],[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("cells[1]"), "{err}");
    }
}
