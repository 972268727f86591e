"""Main entry point for the PQCNN simulator."""

import argparse
import sys
from typing import Any, Dict, List, Optional

from src.config.experiment import ExperimentConfig, load_experiment_config, parse_experiment_config
from src.errors import PQCNNError
from src.tasks.commands import STAGES, cmd_eval, cmd_generate, cmd_inspect, cmd_train
from src.utils.logger import logger, setup_logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqcnn",
        description="PQCNN - photonic quantum convolutional neural network simulator",
    )

    parser.add_argument(
        "command",
        choices=["generate", "train", "eval", "inspect"],
        help="What to run",
    )
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--seed", type=int, help="Dataset seed (generate), single training seed (train) or model seed (eval, inspect)")
    parser.add_argument("--out", help="Output directory (overrides the config)")
    parser.add_argument("--nearest-rank1", action="store_true", help="Load non-rank-1 images through their nearest rank-1 approximation")

    # Command specific
    parser.add_argument("--epochs", type=int, help="Override the number of training epochs")
    parser.add_argument("--model", help="Model file to evaluate or inspect")
    parser.add_argument("--index", type=int, default=0, help="Image index for inspect")
    parser.add_argument("--stage", choices=STAGES, default="qdl", help="Pipeline stage for inspect")
    parser.add_argument("--reshuffles", type=int, help="Random splits the eval readout search is repeated over (0 disables)")

    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    return parser


def apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    """Re-validate the config with the command-line overrides folded in."""
    data: Dict[str, Any] = config.model_dump(mode="json")
    if args.out:
        data["output_dir"] = args.out
    if args.nearest_rank1:
        data["architecture"]["nearest_rank1"] = True
    if args.epochs is not None:
        data["training"]["epochs"] = args.epochs
    if args.reshuffles is not None:
        data["evaluation"]["reshuffles"] = args.reshuffles
    if args.seed is not None:
        if args.command == "generate":
            data["dataset"]["seed"] = args.seed
        elif args.command == "train":
            data["training"]["first_seed"] = args.seed
            data["training"]["seeds"] = 1
    return parse_experiment_config(data)


def run(args: argparse.Namespace) -> None:
    config = apply_overrides(load_experiment_config(args.config), args)
    logger.info(f"Running '{args.command}' with config {args.config} ({config.name})")

    if args.command == "generate":
        cmd_generate(config)
    elif args.command == "train":
        cmd_train(config)
    elif args.command == "eval":
        model_path = args.model
        if model_path is None and args.seed is not None:
            model_path = config.out_path / f"model_seed{args.seed}.json"
        cmd_eval(config, model_path)
    elif args.command == "inspect":
        cmd_inspect(config, args.index, args.stage, args.seed, args.model)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        Process exit code: 0 success, 2 config error, 3 data error,
        4 numerical failure, 1 anything else
    """
    args = build_parser().parse_args(argv)
    if args.debug:
        setup_logger("DEBUG")

    try:
        run(args)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 0
    except PQCNNError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logger.error(f"Application error: {str(e)}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
