//! Link-quality models: received power with correlated shadowing, the
//! RSRP to I_TBS grant map, the transport block size table, 802.11 rate
//! adaptation and logistic block errors.

mod blocks;
mod d2d_rate;
mod grant;
mod pathloss;
mod tbs;

pub use blocks::{block_error, error_probability, BlockErrorModel};
pub use d2d_rate::D2dRateTable;
pub use grant::{grant_itbs, GrantPolicy, MAX_ITBS};
pub use pathloss::{
    mean_received_power, received_power, LinkBudget, LinkKind, PathLossParams, Shadowing,
};
pub use tbs::{tbs_bits, TbsTable, MAX_TABLE_PRB};
