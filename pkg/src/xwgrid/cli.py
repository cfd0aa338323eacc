"""Command-line entry point.

Subcommands: train, eval, analyze, gen-language, inspect.  Exit codes: 0 ok,
2 configuration error, 3 runtime error.  XWG_SEED overrides the config seed;
an explicit --seed beats both.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import nn
from .config import ConfigError, RunConfig, desk_overlay, parse_config, serialize_config
from .evaluation import (
    eval_nav,
    eval_qa,
    topic_distance_summary,
    transfer_probe,
    write_distance_csv,
    xfeat_distance_matrix,
)
from .language import LEXICON, NAV_TYPES, gen_command, gen_question, count_sentences
from .language.lexicon import OBJECT_WORDS
from .language.splits import NO_SPLIT, load_split, make_split, save_split
from .model import GroundingModel
from .nn import CheckpointError, RngHub, load_into
from .sessions import start_session
from .training import Trainer, max_level
from .world import ACTIONS, render_ego, step as world_step, write_pgm, write_ppm
from .world.render import ascii_map


def _load_run_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "desk_scale", False):
        cfg = desk_overlay(cfg)
    if getattr(args, "config", None):
        cfg = parse_config(args.config, base=cfg)
    env_seed = os.environ.get("XWG_SEED")
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError:
            raise ConfigError(f"XWG_SEED={env_seed!r} is not an integer") from None
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "nava", False):
        cfg.nava = True
    return cfg


def _split_for(args, cfg: RunConfig):
    if getattr(args, "split", None):
        return load_split(args.split)
    return cfg.split()


def _load_model(cfg: RunConfig, checkpoint: str) -> GroundingModel:
    model = GroundingModel(cfg.model_config(), len(LEXICON), RngHub(cfg.seed))
    load_into(checkpoint, model.store)
    return model


def cmd_train(args) -> int:
    cfg = _load_run_config(args)
    out_dir = args.out or os.path.join("runs", cfg.config_hash())
    trainer = Trainer(
        cfg.train_config(),
        cfg.model_config(),
        cfg.session_ranges(),
        seed=cfg.seed,
        split=_split_for(args, cfg),
        out_dir=out_dir,
        meta={"config_hash": cfg.config_hash()},
    )
    if args.resume:
        meta = load_into(args.resume, trainer.model.store)
        trainer.target.store.load_values(trainer.model.store.snapshot())
        print(f"resumed from {args.resume} (step {meta.get('step', '?')})")
    with open(os.path.join(out_dir, "config.txt"), "w") as fh:
        fh.write(f"# config_hash={cfg.config_hash()} seed={cfg.seed}\n")
        fh.write(serialize_config(cfg))
    summary = trainer.train(log=print if not args.quiet else None)
    print(f"done: checkpoint={summary['checkpoint']} metrics={summary['metrics']} "
          f"sessions={summary['sessions']}")
    return 0


def cmd_eval(args) -> int:
    cfg = _load_run_config(args)
    split = _split_for(args, cfg)
    model = _load_model(cfg, args.checkpoint)
    before = model.store.state_hash()
    ranges = cfg.session_ranges()
    n_sessions = args.sessions or cfg.eval_sessions
    n_questions = args.questions or cfg.eval_questions
    nav = eval_nav(model, n_sessions, ranges, seed=cfg.seed, split=split,
                   nav_types=cfg.nav_types, zero_shot=args.zero_shot, gamma=cfg.gamma)
    qa = eval_qa(model, n_questions, ranges, seed=cfg.seed, split=split,
                 qa_types=cfg.qa_types, zero_shot=args.zero_shot)
    assert model.store.state_hash() == before, "evaluation must not mutate parameters"
    report = nav.to_csv() + qa.to_csv()
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(f"# config_hash={cfg.config_hash()} seed={cfg.seed}\n")
            fh.write(report)
    print(f"nav_success={nav.nav_success_rate:.4f} qa_accuracy={qa.qa_accuracy:.4f} "
          f"sessions={n_sessions} questions={n_questions}")
    return 0


def cmd_analyze(args) -> int:
    cfg = _load_run_config(args)
    split = _split_for(args, cfg)
    model = _load_model(cfg, args.checkpoint)
    ranges = cfg.session_ranges()
    did = False
    if args.distance_matrix:
        labels, topics, matrix = xfeat_distance_matrix(
            model, args.questions or cfg.eval_questions, ranges, seed=cfg.seed, split=split,
            qa_types=cfg.qa_types,
        )
        write_distance_csv(args.distance_matrix, labels, topics, matrix)
        within, across = topic_distance_summary(topics, matrix)
        print(f"distance-matrix groups={len(labels)} within_topic={within:.4f} "
              f"cross_topic={across:.4f} -> {args.distance_matrix}")
        did = True
    if args.transfer_probe:
        word = args.transfer_probe
        if word not in OBJECT_WORDS:
            raise ConfigError(f"--transfer-probe needs an object word, got {word!r}")
        rate = transfer_probe(model, word, args.frames, ranges, seed=cfg.seed)
        print(f"transfer-probe word={word} localization={rate:.4f} frames={args.frames}")
        did = True
    if not did:
        raise ConfigError("analyze: nothing to do (pass --distance-matrix and/or --transfer-probe)")
    return 0


def cmd_gen_language(args) -> int:
    cfg = _load_run_config(args)
    if args.emit_split:
        split = make_split(args.split_kind, args.split_percent, cfg.seed,
                           object_words=tuple(OBJECT_WORDS[c] for c in range(cfg.classes)))
        save_split(args.emit_split, split)
        print(f"split kind={split.kind} pairs={len(split.held_pairs)} "
              f"words={len(split.held_words)} -> {args.emit_split}")
        return 0
    if args.count:
        nav_count, qa_count = count_sentences()
        print(f"nav={nav_count} qa={qa_count} total={nav_count + qa_count}")
        return 0
    split = _split_for(args, cfg)
    hub = RngHub(cfg.seed)
    env_rng, teacher_rng = hub.stream("genlang/env"), hub.stream("genlang/teacher")
    ranges = cfg.session_ranges()
    rows = []
    while len(rows) < args.n:
        session = start_session(ranges, env_rng, teacher_rng, level=max_level(ranges),
                                split=split, nav_types=cfg.nav_types, on_blocked="resample")
        cmd = session.command
        rows.append((cmd.text, cmd.type_id, f"{cmd.payload[0]},{cmd.payload[1]}"))
        if len(rows) >= args.n:
            break
        q = gen_question(session.state, split, teacher_rng, types=cfg.qa_types)
        if q is not None:
            rows.append((q.text, q.type_id, LEXICON.word_of(q.payload)))
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w")
    try:
        for text, type_id, payload in rows:
            out.write(f"{text}\t{type_id}\t{payload}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_inspect(args) -> int:
    cfg = _load_run_config(args)
    model = _load_model(cfg, args.checkpoint)
    hub = RngHub(cfg.seed)
    ranges = cfg.session_ranges()
    session = start_session(ranges, hub.stream("inspect/env"), hub.stream("inspect/teacher"),
                            level=max_level(ranges), split=_split_for(args, cfg),
                            nav_types=cfg.nav_types, on_blocked="resample")
    state = session.state
    dump_dir = args.dump_dir or "."
    step_no = 0
    print(f"command: {session.command.text} (goal {session.command.payload})")
    while not state.finished:
        frame = render_ego(state)
        toks = np.array([session.command.tokens])
        policy, value, grounding = model.nav_forward(frame[None], toks, keep_steps=True)
        action = ACTIONS[int(np.argmax(policy.data[0]))]
        peak = int(np.argmax(grounding.x_loc.data[0]))
        print(ascii_map(state, names=OBJECT_WORDS))
        question = gen_question(state, NO_SPLIT, hub.stream("inspect/teacher"), types=cfg.qa_types)
        if question is not None:
            _, answers, _ = model.qa_forward(frame[None], np.array([question.tokens]))
            print(f"question: {question.text} -> model: {LEXICON.word_of(int(answers[0]))} "
                  f"(teacher: {LEXICON.word_of(question.payload)})")
        print(f"step {step_no}: x_loc argmax cell=({peak // 13},{peak % 13}) "
              f"value={float(value.data[0]):.3f} proposed={action}")
        try:
            line = input("[enter]=step a <dir>=override d=dump q=quit> ").strip()
        except EOFError:
            line = "q"
        if line == "q":
            print("quit")
            return 0
        if line == "d":
            for i, st in enumerate(grounding.steps, start=1):
                write_pgm(os.path.join(dump_dir, f"step{step_no}_xloc{i}.pgm"),
                          st.x_loc_i.reshape(13, 13))
            write_pgm(os.path.join(dump_dir, f"step{step_no}_xloc_final.pgm"),
                      grounding.x_loc.data[0].reshape(13, 13))
            write_ppm(os.path.join(dump_dir, f"step{step_no}_frame.ppm"), frame)
            print(f"dumped {len(grounding.steps) + 1} heatmaps to {dump_dir}")
            continue
        if line.startswith("a "):
            name = line[2:].strip()
            if name not in ACTIONS:
                print(f"unknown action {name!r}; actions: {', '.join(ACTIONS)}")
                continue
            action = name
        outcome = world_step(state, action)
        print(f"  -> {action} reward={outcome.reward:+.2f} events={sorted(outcome.events)}")
        step_no += 1
    print(f"session over after {state.step_count} steps")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xwgrid", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--desk-scale", action="store_true", help="apply the reduced profile")
        p.add_argument("--split", help="zero-shot split JSON file")

    p = sub.add_parser("train", help="run the training loop")
    common(p)
    p.add_argument("--out", help="run directory (default runs/<config hash>)")
    p.add_argument("--resume", help="checkpoint to continue from")
    p.add_argument("--nava", action="store_true", help="disable the QA pipeline")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="success rate and QA accuracy of a checkpoint")
    common(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--sessions", type=int, default=None)
    p.add_argument("--questions", type=int, default=None)
    p.add_argument("--report", help="write per-type rates as CSV")
    p.add_argument("--zero-shot", action="store_true",
                   help="restrict to sentences containing held-out items")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("analyze", help="channel-mask distances and transfer probes")
    common(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--distance-matrix", help="output CSV path")
    p.add_argument("--transfer-probe", help="object word to probe")
    p.add_argument("--questions", type=int, default=None)
    p.add_argument("--frames", type=int, default=200)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("gen-language", help="emit sentence datasets or enumeration counts")
    common(p)
    p.add_argument("--count", action="store_true", help="print sentence-space totals")
    p.add_argument("--n", type=int, default=100, help="samples to emit")
    p.add_argument("--out", help="TSV output path (default stdout)")
    p.add_argument("--emit-split", help="write a fresh split JSON here")
    p.add_argument("--split-kind", default="ZS2", choices=("ZS1", "ZS2"))
    p.add_argument("--split-percent", type=float, default=25.0)
    p.set_defaults(fn=cmd_gen_language)

    p = sub.add_parser("inspect", help="step through a session in the terminal")
    common(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dump-dir", help="where 'd' writes PGM heatmaps")
    p.set_defaults(fn=cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, CheckpointError) as e:
        print(f"xwgrid-error code=2 message={str(e)!r}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - the CLI boundary reports, not crashes
        print(f"xwgrid-error code=3 message={str(e)!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
