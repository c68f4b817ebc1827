pub mod error;
pub mod chambers;
pub mod cobord;
pub mod deltacx;
pub mod exactalg;
pub mod hinv;
pub mod oracle;

pub use error::{Error, Result};
