use serde::{Deserialize, Serialize};

use super::Image;
use crate::error::{Error, Result};
use crate::rng::RngState;

/// Synthetic cover-image families.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverModel {
    #[default]
    Uniform,
    Smooth,
    Gradient,
    Bimodal,
}

impl CoverModel {
    pub const ALL: [CoverModel; 4] = [
        CoverModel::Uniform,
        CoverModel::Smooth,
        CoverModel::Gradient,
        CoverModel::Bimodal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoverModel::Uniform => "uniform",
            CoverModel::Smooth => "smooth",
            CoverModel::Gradient => "gradient",
            CoverModel::Bimodal => "bimodal",
        }
    }
}

impl std::fmt::Display for CoverModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CoverModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(CoverModel::Uniform),
            "smooth" => Ok(CoverModel::Smooth),
            "gradient" => Ok(CoverModel::Gradient),
            "bimodal" => Ok(CoverModel::Bimodal),
            other => Err(Error::Config(format!("unknown cover model {other:?}"))),
        }
    }
}

/// Tunable constants of the cover generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverParams {
    pub blur_passes: u32,
    pub gradient_sigma: f64,
    pub bimodal_means: (f64, f64),
    pub bimodal_sigma: f64,
}

impl Default for CoverParams {
    fn default() -> Self {
        Self {
            blur_passes: 3,
            gradient_sigma: 16.0,
            bimodal_means: (80.0, 176.0),
            bimodal_sigma: 12.0,
        }
    }
}

pub fn generate_cover(
    model: CoverModel,
    width: usize,
    height: usize,
    st: &mut RngState,
) -> Result<Image> {
    generate_cover_with(model, width, height, st, &CoverParams::default())
}

pub fn generate_cover_with(
    model: CoverModel,
    width: usize,
    height: usize,
    st: &mut RngState,
    params: &CoverParams,
) -> Result<Image> {
    if width < 2 || height < 2 {
        return Err(Error::Dimensions {
            width,
            height,
            reason: "cover models need at least 2x2 pixels",
        });
    }
    let n = width * height;
    let pixels = match model {
        CoverModel::Uniform => uniform_pixels(n, st),
        CoverModel::Smooth => {
            let mut img = Image::new(width, height, uniform_pixels(n, st))?;
            for _ in 0..params.blur_passes {
                img = box_blur3(&img);
            }
            return Ok(img);
        }
        CoverModel::Gradient => {
            let mut px = Vec::with_capacity(n);
            for _row in 0..height {
                for col in 0..width {
                    let ramp = (255.0 * col as f64 / (width - 1) as f64).round();
                    let noise = (st.next_gaussian() * params.gradient_sigma).round();
                    px.push(clamp_u8(ramp + noise));
                }
            }
            px
        }
        CoverModel::Bimodal => (0..n)
            .map(|_| {
                let mean = if st.next_f64() < 0.5 {
                    params.bimodal_means.0
                } else {
                    params.bimodal_means.1
                };
                clamp_u8((mean + st.next_gaussian() * params.bimodal_sigma).round())
            })
            .collect(),
    };
    Image::new(width, height, pixels)
}

fn uniform_pixels(n: usize, st: &mut RngState) -> Vec<u8> {
    (0..n).map(|_| (st.next_u64() % 256) as u8).collect()
}

fn clamp_u8(v: f64) -> u8 {
    v.clamp(0.0, 255.0) as u8
}

/// One 3x3 mean filter pass, edges replicated, rounded half-up.
fn box_blur3(img: &Image) -> Image {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::with_capacity(w * h);
    for r in 0..h as isize {
        for c in 0..w as isize {
            let mut sum = 0u32;
            for dr in -1..=1 {
                for dc in -1..=1 {
                    sum += img.at_clamped(r + dr, c + dc) as u32;
                }
            }
            out.push(((sum + 4) / 9) as u8);
        }
    }
    Image::new(w, h, out).expect("blur preserves dimensions")
}
