//! Bundled reference data.

/// The eleven simplicial rank-3 matroids in triple-index form, one per line.
pub const APPENDIX_MATROIDS: &str = include_str!("../data/appendix_matroids.txt");

/// A 35-line simplicial arrangement over a quartic number field.
pub const ARR35_K2: &str = include_str!("../data/arr35_K2.txt");

/// The B3 reflection arrangement over Q.
pub const B3: &str = include_str!("../data/b3.txt");

/// The H3 reflection arrangement reduced into F_14639.
pub const H3_FF: &str = include_str!("../data/h3_ff.txt");
