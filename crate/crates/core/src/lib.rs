pub mod exactlin;
pub mod quiveralg;
pub mod repmod;
pub mod homalg;
pub mod stablecm;
pub mod clustercat;
pub mod format;
pub mod report;
pub mod suite;
pub mod cli;
