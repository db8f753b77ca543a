from report.base import ReportCommand
from report.suites import run_suite


class Command(ReportCommand):
    help = "Run the bracket, symmetry, adjointness and eigenrelation checks of one scenario"

    def build(self, config, report):
        run_suite(config, report)
