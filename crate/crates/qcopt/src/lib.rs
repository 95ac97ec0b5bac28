pub mod model;
pub mod quality;
pub mod budget_opt;
pub mod cost_min;
pub mod lp;
pub mod tokenizer;
