#[derive(Debug, Clone, Copy)]
pub enum /*C %name% */ Color {
    /*C forall v in variants sep "," */
    /*C %v% */ Red
    /*C end */
}

impl /*C %name% */ Color {
    pub fn count() -> usize { /*C %count% */ 1 }
}
