"""
Punto de entrada de la línea de comandos
"""
import os
import sys

# Agregar la carpeta del paquete al path
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), 'gaitpd'))

from app import create_app

app = create_app()

if __name__ == "__main__":
    app()
