//! Path-colorings of G₁, G′₂ and the completion over H.

pub mod g1;
pub mod g2;
pub mod h;
pub mod search;
pub mod state;

pub use search::{Order, Outcome, Search, Step};
pub use state::{bit, mask_colors, Color, ColorMask, ColorState, K2, K3};
