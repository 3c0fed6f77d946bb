//! Grayscale rendering of probability fields and binary PGM output.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolution::ProbabilityField;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Mapping {
    Linear,
    /// Maps `sqrt(P)`, the amplitude.
    #[default]
    Sqrt,
    /// Maps `ln(max(P, floor))`.
    Log { floor: f64 },
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mapping::Linear => write!(f, "linear"),
            Mapping::Sqrt => write!(f, "sqrt"),
            Mapping::Log { floor } => write!(f, "log:{floor:e}"),
        }
    }
}

impl std::str::FromStr for Mapping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Mapping::Linear),
            "sqrt" => Ok(Mapping::Sqrt),
            "log" => Ok(Mapping::Log { floor: 1e-8 }),
            _ => match s.strip_prefix("log:").map(str::parse::<f64>) {
                Some(Ok(floor)) if floor > 0.0 => Ok(Mapping::Log { floor }),
                _ => Err(Error::invalid(format!(
                    "unrecognised mapping '{s}' (linear, sqrt, log, log:<floor>)"
                ))),
            },
        }
    }
}

impl Mapping {
    fn apply(&self, p: f64) -> f64 {
        match *self {
            Mapping::Linear => p,
            Mapping::Sqrt => p.sqrt(),
            Mapping::Log { floor } => p.max(floor).ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_value(self) -> u16 {
        match self {
            BitDepth::Eight => 255,
            BitDepth::Sixteen => 65535,
        }
    }
}

/// Grayscale raster, row-major from the top row. The top row holds site `N`
/// and the bottom row site 1; columns are time samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub depth: BitDepth,
    pub pixels: Vec<u16>,
}

impl RasterImage {
    /// Pixel at a 1-based site and a time sample index.
    pub fn at(&self, site: usize, k: usize) -> u16 {
        self.pixels[(self.height - site) * self.width + k]
    }
}

/// Global normalisation over the whole field; the largest mapped value is
/// white. A field with a single mapped value renders all white.
pub fn render_carpet(field: &ProbabilityField, mapping: Mapping, depth: BitDepth) -> Result<RasterImage> {
    if field.is_empty() {
        return Err(Error::invalid("cannot render an empty field"));
    }
    if let Mapping::Log { floor } = mapping {
        if !(floor > 0.0) {
            return Err(Error::invalid(format!("log mapping floor must be > 0, got {floor}")));
        }
    }
    let (lo, hi) = field
        .values()
        .iter()
        .map(|&p| mapping.apply(p))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let max = depth.max_value() as f64;
    let quantise = |p: f64| -> u16 {
        if hi <= lo {
            return depth.max_value();
        }
        ((mapping.apply(p) - lo) / (hi - lo) * max).round().clamp(0.0, max) as u16
    };
    let (width, height) = (field.grid().len(), field.n_sites());
    let mut pixels = Vec::with_capacity(width * height);
    for site in (1..=height).rev() {
        pixels.extend((0..width).map(|k| quantise(field.get(site, k))));
    }
    Ok(RasterImage {
        width,
        height,
        depth,
        pixels,
    })
}

/// Binary `P5` encoding; `comments` become `#` lines after the magic number.
pub fn encode_pgm(image: &RasterImage, comments: &[String]) -> Vec<u8> {
    let mut out = b"P5\n".to_vec();
    for c in comments {
        for line in c.lines() {
            out.extend_from_slice(format!("# {line}\n").as_bytes());
        }
    }
    out.extend_from_slice(format!("{} {}\n{}\n", image.width, image.height, image.depth.max_value()).as_bytes());
    match image.depth {
        BitDepth::Eight => out.extend(image.pixels.iter().map(|&p| p as u8)),
        BitDepth::Sixteen => out.extend(image.pixels.iter().flat_map(|p| p.to_be_bytes())),
    }
    out
}

pub fn write_pgm(image: &RasterImage, path: &Path, comments: &[String]) -> Result<()> {
    crate::io::write_bytes(path, &encode_pgm(image, comments))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::TimeGrid;

    fn field(n: usize, values: Vec<f64>) -> ProbabilityField {
        let samples = values.len() / n;
        ProbabilityField::from_values(n, TimeGrid::integers(0, samples as u64 - 1).unwrap(), values).unwrap()
    }

    #[test]
    fn constant_field_is_white() {
        let img = render_carpet(&field(3, vec![1.0 / 3.0; 12]), Mapping::Linear, BitDepth::Eight).unwrap();
        assert!(img.pixels.iter().all(|&p| p == 255));
    }

    #[test]
    fn two_pixels_black_and_white() {
        for mapping in [Mapping::Linear, Mapping::Sqrt, Mapping::Log { floor: 1e-12 }] {
            let img = render_carpet(&field(2, vec![0.0, 1.0]), mapping, BitDepth::Sixteen).unwrap();
            // site 2 on the top row
            assert_eq!(img.pixels, vec![65535, 0]);
            assert_eq!((img.at(1, 0), img.at(2, 0)), (0, 65535));
        }
    }

    #[test]
    fn header_arithmetic() {
        let img = RasterImage {
            width: 2,
            height: 2,
            depth: BitDepth::Eight,
            pixels: vec![0, 255, 128, 7],
        };
        let bytes = encode_pgm(&img, &[]);
        assert_eq!(&bytes[..11], b"P5\n2 2\n255\n");
        assert_eq!(bytes.len(), 11 + 4);
        let wide = RasterImage {
            depth: BitDepth::Sixteen,
            pixels: vec![0, 65535, 256, 1],
            ..img
        };
        let bytes = encode_pgm(&wide, &["n=2".into()]);
        assert!(bytes.starts_with(b"P5\n# n=2\n2 2\n65535\n"));
        assert_eq!(&bytes[bytes.len() - 8..], &[0, 0, 255, 255, 1, 0, 0, 1]);
    }

    #[test]
    fn mapping_parsing() {
        assert_eq!("sqrt".parse::<Mapping>().unwrap(), Mapping::Sqrt);
        assert_eq!("log:1e-6".parse::<Mapping>().unwrap(), Mapping::Log { floor: 1e-6 });
        assert!("log:-1".parse::<Mapping>().is_err());
        assert!("gamma".parse::<Mapping>().is_err());
    }
}
