pub mod error;
pub mod linalg;
pub mod poly;
pub mod ring;
pub mod series;
pub mod groups;
pub mod fgl;
pub mod laws;
pub mod lazard;
pub mod euler;
pub mod completion;
pub mod fixed_points;
pub mod parse;
