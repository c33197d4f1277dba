import logging

import click

from config import Config
from errors import GaitPDError

# Configurar logging
logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


class PipelineGroup(click.Group):
    """Grupo de comandos que traduce GaitPDError a su código de salida"""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except GaitPDError as e:
            notes = ''.join(f" ({note})" for note in getattr(e, '__notes__', []))
            logger.error(f"{type(e).__name__}: {str(e)}{notes}")
            click.echo(f"Error: {str(e)}{notes}", err=True)
            ctx.exit(e.exit_code)


def create_app(config_class=Config):
    """Factory para crear la CLI"""

    @click.group(cls=PipelineGroup)
    @click.version_option(config_class.APP_VERSION, prog_name=config_class.APP_NAME)
    def app():
        """Detección de Parkinson y severidad UPDRS a partir de señales VGRF"""
        config_class.init_app()

    # Importar y registrar comandos
    from cli import ablate, cv, ingest, predict

    app.add_command(ingest)
    app.add_command(cv)
    app.add_command(ablate)
    app.add_command(predict)

    logger.debug(f"CLI {config_class.APP_NAME} v{config_class.APP_VERSION} lista")

    return app


if __name__ == '__main__':
    create_app()()
