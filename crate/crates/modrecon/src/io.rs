//! File I/O: PGM images and CSV tables.
pub mod csv;
pub mod pgm;
