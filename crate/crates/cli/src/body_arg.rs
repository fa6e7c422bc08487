//! Parsing of body, point and circle command-line arguments.

use std::path::Path;

use eqlab_core::bodies2d::{Body, BodySpec};
use eqlab_core::geometry2d::{Circle, Point};
use eqlab_core::Error;

/// Parses `--body` values: a shorthand like `ellipse:2,1`, `disc:1`,
/// `limacon:1,3`, `yanagihara`, `parabola`, or a path to a BodySpec JSON
/// file (`{"kind": ..., "params": ..., "samples": ...}`).
pub fn parse_body(arg: &str) -> Result<Body, Error> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Error::InvalidBody(format!("cannot read body file '{arg}': {e}")))?;
        let spec: BodySpec = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidBody(format!("invalid body JSON in '{arg}': {e}")))?;
        return spec.build();
    }
    let (kind, params) = match arg.split_once(':') {
        Some((k, p)) => (k, p),
        None => (arg, ""),
    };
    let nums: Vec<f64> = if params.is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidBody(format!("bad numeric parameter '{s}'")))
            })
            .collect::<Result<_, _>>()?
    };
    let mut spec = BodySpec {
        kind: kind.to_string(),
        params: Default::default(),
        samples: None,
    };
    match kind {
        "ellipse" | "limacon" => {
            if nums.len() != 2 {
                return Err(Error::InvalidBody(format!(
                    "'{kind}' takes two parameters, e.g. {kind}:2,1"
                )));
            }
            spec.params.insert("a".into(), nums[0].into());
            spec.params.insert("b".into(), nums[1].into());
        }
        "disc" => {
            if nums.len() != 1 {
                return Err(Error::InvalidBody("'disc' takes one radius, e.g. disc:1".into()));
            }
            spec.params.insert("radius".into(), nums[0].into());
        }
        "yanagihara" => {}
        "parabola" | "parabola_body" => {
            spec.kind = "parabola_body".into();
        }
        other => {
            return Err(Error::InvalidBody(format!(
                "unknown body '{other}' (expected ellipse:a,b disc:r limacon:a,b yanagihara parabola, or a JSON file path)"
            )))
        }
    }
    spec.build()
}

/// Parses `--point` values: `pole`, `center`, `origin`, or `x,y`.
pub fn parse_point(arg: &str) -> Result<Point, Error> {
    match arg {
        "pole" | "center" | "origin" => Ok(Point::origin()),
        other => {
            let parts: Vec<&str> = other.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Domain(format!(
                    "point must be 'pole' or 'x,y', got '{other}'"
                )));
            }
            let x = parts[0].trim().parse::<f64>();
            let y = parts[1].trim().parse::<f64>();
            match (x, y) {
                (Ok(x), Ok(y)) => Ok(Point::new(x, y)),
                _ => Err(Error::Domain(format!("bad point coordinates '{other}'"))),
            }
        }
    }
}

/// Parses `--circle cx,cy,r`.
pub fn parse_circle(arg: &str) -> Result<Circle, Error> {
    let parts: Vec<f64> = arg
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("bad circle component '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != 3 {
        return Err(Error::Domain(format!(
            "circle must be cx,cy,r, got '{arg}'"
        )));
    }
    Circle::new(Point::new(parts[0], parts[1]), parts[2])
}
