use anyhow::Result;
use crate::args::SortCommand;
pub fn run(_command: SortCommand) -> Result<i32> {
    anyhow::bail!("not wired yet")
}
