"""
Configuration settings for the relational verifier.
Iteration bounds, search caps, document keys and exit codes.
"""
import os


class VerifierConfig:
    """Configuration for library computations."""

    # Bounds on stabilizing iterations (override with environment variables)
    CLOSURE_MAX_ITERS: int = 64
    FIXPOINT_MAX_ITERS: int = 256

    # Largest apex size accepted by span mediator search
    SPAN_APEX_CAP: int = 8

    LOG_LEVEL: str = "WARNING"

    @classmethod
    def get_closure_max_iters(cls) -> int:
        """Get the closure squaring bound from environment or default."""
        return int(os.getenv("RELVERIFY_CLOSURE_MAX_ITERS", cls.CLOSURE_MAX_ITERS))

    @classmethod
    def get_fixpoint_max_iters(cls) -> int:
        """Get the dialectical fixpoint iteration bound from environment or default."""
        return int(os.getenv("RELVERIFY_FIXPOINT_MAX_ITERS", cls.FIXPOINT_MAX_ITERS))

    @classmethod
    def get_span_apex_cap(cls) -> int:
        """Get the mediator search apex cap from environment or default."""
        return int(os.getenv("RELVERIFY_SPAN_APEX_CAP", cls.SPAN_APEX_CAP))

    @classmethod
    def get_log_level(cls) -> str:
        """Get the log level name from environment or default."""
        return os.getenv("RELVERIFY_LOG_LEVEL", cls.LOG_LEVEL).upper()


class DocumentConfig:
    """Configuration for verification documents."""

    KNOWN_SECTIONS = ["quantale", "types", "state", "matrices", "predicates", "programs", "assertions"]

    # Required fields per literal kind
    MATRIX_FIELDS = ["src", "dst", "entries"]
    PREDICATE_FIELDS = ["type"]
    ASSERTION_FIELDS = ["pre", "post"]

    INFINITY_TOKEN = "inf"
    # Numeric strings: "3", "1.25", "7/2"; no signs or exponents
    NUMBER_PATTERN = r"\d+(\.\d+)?(/\d+)?"
    SUM_LABEL_SEPARATOR = "."


class CliConfig:
    """Exit codes and subcommands of the command-line front end."""

    EXIT_HOLDS = 0
    EXIT_FAILS = 1
    EXIT_ERROR = 2

    COMMANDS = ["check", "sp", "wlp", "star", "dump", "compile"]
    BUILTIN_QUANTALES = ["boolean", "tropical", "natural"]
