use anyhow::Result;
use crate::args::DiagCommand;
pub fn run(_command: DiagCommand) -> Result<i32> {
    anyhow::bail!("not wired yet")
}
