use thiserror::Error;

#[derive(Debug, Error)]
pub enum LstmError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("window has {got} messages, expected {expected}")]
    WindowLength { got: usize, expected: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dataset contains a single class; ROC/AUC are undefined")]
    SingleClassDataset,

    #[error("training loss became non-finite at epoch {epoch}")]
    NanLoss { epoch: usize },

    #[error("invalid train config: {0}")]
    InvalidConfig(String),

    #[error("the residual self-attention block position is reserved and not implemented")]
    RsabUnavailable,

    #[error("checkpoint format: {0}")]
    Checkpoint(String),

    #[error("I/O: {0}")]
    Io(String),
}

impl From<std::io::Error> for LstmError {
    fn from(e: std::io::Error) -> Self {
        LstmError::Io(e.to_string())
    }
}
