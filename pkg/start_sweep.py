import logging
import sys

import click

from weighted_brauer.sweep import sweep
from weighted_brauer.utils.config import load_settings

logger = logging.getLogger(__name__)

# (dim, max_weight)
ACCEPTANCE_SWEEPS = [(2, 10), (3, 6)]


@click.command()
@click.option('--jobs', type=int, default=None, help='Worker processes (default from settings)')
@click.option('--config', 'config_path', default=None, type=click.Path(dir_okay=False), help='YAML settings file')
def main(jobs, config_path):
    settings = load_settings(config_path)
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    failed = 0
    for dim, max_weight in ACCEPTANCE_SWEEPS:
        report = sweep(dim, max_weight, jobs=jobs or settings.jobs, chunksize=settings.sweep_chunksize)
        failures = report.failures()
        logger.info(f"dim={dim} max_weight={max_weight}: {report.checked} checked, {len(failures)} failed")
        for failure in failures:
            logger.error(f"{failure['weights']}: {', '.join(failure['failed'])}")
        failed += len(failures)

    sys.exit(1 if failed else 0)


if __name__ == '__main__':
    main()
