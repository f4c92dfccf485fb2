use std::fmt;

use thiserror::Error;

use crate::lookup::LookupError;
use crate::table::{format_number, parse_number};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const fn new(r: u8, g: u8, b: u8) -> Rgb {
        Rgb { r, g, b }
    }

    /// `#RRGGBB`, uppercase.
    pub fn hex(self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.r, self.g, self.b)
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.g, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub force: u32,
    /// Lowest speed of the band; the band runs up to the next band's lower
    /// speed, the last one has no upper end.
    pub lower_speed: f64,
    pub rgb: Rgb,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PaletteError {
    #[error("palette line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("palette is empty")]
    Empty,
}

/// Force bands with their colours. Forces run 0, 1, 2, ... and lower speeds
/// strictly increase.
#[derive(Debug, Clone, PartialEq)]
pub struct BandPalette {
    bands: Vec<Band>,
}

impl BandPalette {
    pub fn new(bands: Vec<Band>) -> Result<BandPalette, PaletteError> {
        if bands.is_empty() {
            return Err(PaletteError::Empty);
        }
        for (i, b) in bands.iter().enumerate() {
            let line = i + 2;
            if b.force as usize != i {
                return Err(PaletteError::Line {
                    line,
                    message: format!("expected force {i}, found {}", b.force),
                });
            }
            if !b.lower_speed.is_finite() || (i > 0 && b.lower_speed <= bands[i - 1].lower_speed) {
                return Err(PaletteError::Line {
                    line,
                    message: format!(
                        "lower speed {} does not increase",
                        format_number(b.lower_speed)
                    ),
                });
            }
        }
        Ok(BandPalette { bands })
    }

    /// Reads the `force,speed,r,g,b` CSV format.
    pub fn from_csv(text: &str) -> Result<BandPalette, PaletteError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim().eq_ignore_ascii_case("force,speed,r,g,b") => {}
            Some((i, h)) => {
                return Err(PaletteError::Line {
                    line: i + 1,
                    message: format!("expected header force,speed,r,g,b, found {h:?}"),
                })
            }
            None => return Err(PaletteError::Empty),
        }
        let mut bands = Vec::new();
        for (i, line) in lines {
            let err = |message: String| PaletteError::Line { line: i + 1, message };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let [force, speed, r, g, b] = fields[..] else {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            };
            let channel = |s: &str| {
                s.parse::<u8>()
                    .map_err(|_| err(format!("colour channel {s:?} is not in 0..=255")))
            };
            bands.push(Band {
                force: force
                    .parse()
                    .map_err(|_| err(format!("force {force:?} is not a non-negative integer")))?,
                lower_speed: parse_number(speed)
                    .ok_or_else(|| err(format!("speed {speed:?} is not a number")))?,
                rgb: Rgb::new(channel(r)?, channel(g)?, channel(b)?),
            });
        }
        BandPalette::new(bands)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("force,speed,r,g,b\n");
        for b in &self.bands {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                b.force,
                format_number(b.lower_speed),
                b.rgb.r,
                b.rgb.g,
                b.rgb.b
            ));
        }
        out
    }

    /// The colours of the printed Beaufort scale.
    pub fn beaufort() -> BandPalette {
        BandPalette::from_csv(crate::fixtures::BEAUFORT_PALETTE_CSV).expect("bundled palette is valid")
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// The force whose band contains `speed`: a plain scan for the last band
    /// starting at or below it.
    pub fn band_for_value(&self, speed: f64) -> Result<u32, LookupError> {
        if speed.is_nan() || speed < 0.0 {
            return Err(LookupError::value(format!(
                "speed {} is negative",
                format_number(speed)
            )));
        }
        self.bands
            .iter()
            .rev()
            .find(|b| b.lower_speed <= speed)
            .map(|b| b.force)
            .ok_or_else(|| {
                LookupError::na(format!("speed {} is below the first band", format_number(speed)))
            })
    }

    pub fn rgb_for_force(&self, force: u32) -> Result<Rgb, LookupError> {
        self.bands
            .get(force as usize)
            .map(|b| b.rgb)
            .ok_or_else(|| LookupError::reference(format!("no band for force {force}")))
    }
}
