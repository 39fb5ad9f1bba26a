//! Command-line front end: argument handling in [`app`], drawings in [`render`].

pub mod app;
pub mod render;
