pub mod groups;
pub mod homsearch;
pub mod knots;
pub mod poly;
pub mod tavorder;
pub mod twisted;
