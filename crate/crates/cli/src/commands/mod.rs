pub mod conformation;
pub mod quantize;
pub mod residuals;
pub mod spectrum;
pub mod sweep;
