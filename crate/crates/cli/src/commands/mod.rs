pub mod bench;
pub mod convert;
pub mod generate;
pub mod run;
pub mod sweep;
