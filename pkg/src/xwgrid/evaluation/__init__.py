from .analysis import (
    collect_questions,
    read_distance_csv,
    topic_distance_summary,
    transfer_probe,
    write_distance_csv,
    xfeat_distance_matrix,
)
from .harness import (
    EvalReport,
    eval_nav,
    eval_qa,
    greedy_policy,
    run_session,
    scripted_action,
)

__all__ = [
    "EvalReport",
    "collect_questions",
    "eval_nav",
    "eval_qa",
    "greedy_policy",
    "read_distance_csv",
    "run_session",
    "scripted_action",
    "topic_distance_summary",
    "transfer_probe",
    "write_distance_csv",
    "xfeat_distance_matrix",
]
