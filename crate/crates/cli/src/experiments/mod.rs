//! Named experiments, one per verified property.

mod casimir;
mod comparison;
mod localization;
mod mollifier;
mod spectral;
mod tables;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::registry::{entry, Entry};

pub use casimir::CasimirAlpha;
pub use comparison::{Decay, Gronwall, Rauch, RiccatiSandwich};
pub use localization::{CutoffDecay, Ims, LocalizationBounds};
pub use mollifier::{MollifyBounds, MollifyPapa};
pub use spectral::{EssBottom, Surface, Weyl};
pub use tables::{Dolbeault, HodgeSweep, Tables};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Fit(#[from] orbispec::fit::FitError),
    #[error(transparent)]
    Geom(#[from] orbispec::geom::GeomError),
    #[error(transparent)]
    Comparison(#[from] orbispec::comparison::ComparisonError),
    #[error(transparent)]
    Localization(#[from] orbispec::localization::LocalizationError),
    #[error(transparent)]
    Tables(#[from] orbispec::tables::TableError),
    #[error(transparent)]
    Casimir(#[from] orbispec::casimir::CasimirError),
    #[error(transparent)]
    Mollifier(#[from] orbispec::mollifier::MollifierError),
    #[error(transparent)]
    Spectral(#[from] orbispec::spectral::SpectralError),
}

/// Per-experiment state: the run seed and a generator derived from it and
/// the experiment label, so results do not depend on scheduling.
pub struct Ctx {
    pub seed: u64,
    pub rng: ChaCha8Rng,
}

impl Ctx {
    pub fn new(seed: u64, label: &str) -> Self {
        // FNV-1a over the label
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        Ctx {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed ^ h),
        }
    }
}

pub fn entries() -> Vec<Entry> {
    vec![
        entry::<CasimirAlpha>(),
        entry::<CutoffDecay>(),
        entry::<Decay>(),
        entry::<Dolbeault>(),
        entry::<EssBottom>(),
        entry::<Gronwall>(),
        entry::<HodgeSweep>(),
        entry::<Ims>(),
        entry::<LocalizationBounds>(),
        entry::<MollifyBounds>(),
        entry::<MollifyPapa>(),
        entry::<Rauch>(),
        entry::<RiccatiSandwich>(),
        entry::<Surface>(),
        entry::<Tables>(),
        entry::<Weyl>(),
    ]
}
