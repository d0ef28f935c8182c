pub mod config;
pub mod dataset;
pub mod loss;
pub mod mlp;
pub mod train;

pub use config::TrainConfig;
pub use dataset::{make_dataset, Dataset, Embedding, EmbeddingSpec};
pub use loss::{loss_and_grad, LossAndGrad};
pub use mlp::{Activation, Dense, ForwardCache, Gradients, MlpModel};
pub use train::{encoder, evaluate_error, train, train_with_embedding, ErrorSummary, LossPoint, TrainReport};
