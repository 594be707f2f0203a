import sys

from src.domain.value_objects import ErrorDetail

EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_NO_INPUT = 66
EXIT_SOFTWARE = 70


class ErrorHandlers:
    @staticmethod
    def _fail(detail: ErrorDetail, exit_code: int):
        print(detail.model_dump_json(), file=sys.stderr)
        raise SystemExit(exit_code)

    @staticmethod
    def handle_invalid_graph(e: Exception):
        """Handle unparsable or invalid graph documents"""
        ErrorHandlers._fail(
            ErrorDetail(
                message="Invalid graph supplied",
                details=str(e),
                code="INVALID_GRAPH",
            ),
            EXIT_DATA,
        )

    @staticmethod
    def handle_input_error(e: Exception):
        """Handle unreadable input files"""
        ErrorHandlers._fail(
            ErrorDetail(
                message="Could not read input",
                details=str(e),
                code="INPUT_ERROR",
            ),
            EXIT_NO_INPUT,
        )

    @staticmethod
    def handle_invalid_usage(e: Exception):
        """Handle bad arguments and option combinations"""
        ErrorHandlers._fail(
            ErrorDetail(
                message="Invalid command-line usage",
                details=str(e),
                code="INVALID_USAGE",
            ),
            EXIT_USAGE,
        )

    @staticmethod
    def handle_oracle_mismatch(e: Exception):
        """Handle disagreement between independent computations"""
        ErrorHandlers._fail(
            ErrorDetail(
                message="Internal consistency check failed",
                details=str(e),
                code="ORACLE_MISMATCH",
            ),
            EXIT_SOFTWARE,
        )

    @staticmethod
    def handle_internal_error(e: Exception):
        """Handle unexpected internal errors"""
        ErrorHandlers._fail(
            ErrorDetail(
                message="Unexpected internal error",
                details=str(e),
                code="INTERNAL_ERROR",
            ),
            EXIT_SOFTWARE,
        )
