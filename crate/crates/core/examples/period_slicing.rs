use bcall::{
    filter_low_participation, slice_by_period, Cast, Legislator, PeriodPolicy, RollCall, VoteMatrix,
};

fn main() -> bcall::Result<()> {
    use Cast::*;
    let legislators = ["p1", "p2", "p3", "p4"].map(Legislator::new).to_vec();
    let rollcalls = vec![
        RollCall::new("V1", "2019-11-03"),
        RollCall::new("V2", "2019-12-10"),
        RollCall::new("V3", "2020-02-14"),
        RollCall::new("V4", "2020-06-30"),
        RollCall::new("V5", "2021-01-05"),
    ];
    #[rustfmt::skip]
    let casts = vec![
        Yea,    Nay,    Yea,    Yea,    Absent,
        Nay,    Nay,    Absent, Absent, Absent,
        Absent, Absent, Yea,    Nay,    Yea,
        Yea,    Abstain, Nay,   Nay,    Nay,
    ];
    let m = VoteMatrix::from_parts(legislators, rollcalls, casts)?;

    let policies = [
        ("calendar years", PeriodPolicy::CalendarYear),
        (
            "explicit ranges",
            "ranges=first:2019-01-01..2020-03-31,second:2020-04-01..2021-12-31".parse()?,
        ),
    ];
    for (name, policy) in &policies {
        println!("{name}");
        for (key, slice) in slice_by_period(&m, policy)? {
            let kept = filter_low_participation(&slice, 0.5)?;
            let ids: Vec<&str> = kept.legislators().iter().map(|l| l.id.as_str()).collect();
            println!(
                "  {key}: {} rollcalls, {} in slice, kept at 50%: {:?}",
                slice.n_rollcalls(),
                slice.n_legislators(),
                ids
            );
        }
    }
    Ok(())
}
