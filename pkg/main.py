#!/usr/bin/env python3
"""
epilab - Main Entry Point
"""

import sys
import logging
from pathlib import Path
from typing import List, Optional

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from src.config.settings import ConfigManager, get_config_manager
from src.ui.cli import EXIT_FAILURE, EXIT_INPUT, dispatch, parse_args


def setup_logging(config: ConfigManager, level_override: Optional[str] = None):
    """Set up application logging; stdout stays reserved for reports"""
    level_name = (level_override or config.settings.log_level).upper()
    log_level = getattr(logging, level_name, logging.INFO)

    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.settings.log_to_file:
        log_dir = config.data_dir / "logs"
        log_dir.mkdir(exist_ok=True)
        handlers.append(logging.FileHandler(log_dir / "epilab.log"))

    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )

    # Set specific loggers
    logging.getLogger("src.core").setLevel(log_level)
    logging.getLogger("src.harness").setLevel(log_level)
    logging.getLogger("src.integration").setLevel(log_level)
    logging.getLogger("src.ui").setLevel(log_level)

    logger = logging.getLogger(__name__)
    logger.debug(f"Log level set to: {level_name}")


def check_dependencies() -> bool:
    """Check if required dependencies are available"""
    logger = logging.getLogger(__name__)
    missing_deps = []

    try:
        import numpy
        logger.debug(f"NumPy version: {numpy.__version__}")
    except ImportError:
        missing_deps.append("numpy")

    try:
        import sympy
        logger.debug(f"SymPy version: {sympy.__version__}")
    except ImportError:
        missing_deps.append("sympy")

    try:
        import yaml
        logger.debug("PyYAML available")
    except ImportError:
        missing_deps.append("PyYAML")

    try:
        import platformdirs
        logger.debug("platformdirs available")
    except ImportError:
        missing_deps.append("platformdirs")

    if missing_deps:
        logger.error(f"Missing required dependencies: {', '.join(missing_deps)}")
        print(f"\nError: Missing required dependencies: {', '.join(missing_deps)}", file=sys.stderr)
        print(f"pip install {' '.join(missing_deps)}", file=sys.stderr)
        return False

    return True


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point"""
    args = parse_args(argv)
    try:
        config = get_config_manager(Path(args.config) if args.config else None)
        setup_logging(config, args.log_level)

        if not check_dependencies():
            return EXIT_INPUT

        return dispatch(args, config)

    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return EXIT_FAILURE
    except Exception as e:
        logging.getLogger(__name__).error(f"Fatal error: {e}", exc_info=True)
        print(f"\nFatal error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
