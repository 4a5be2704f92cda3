pub mod cyclotomic;
pub mod interval;
pub mod poly;
pub mod value;
pub mod weightspec;
pub mod ziv;

pub use cyclotomic::Cyclotomic;
pub use interval::RatInterval;
pub use poly::{BoundResult, IntPoly};
pub use value::{ApproxComplex, ComplexValue};
pub use weightspec::WeightSpec;
