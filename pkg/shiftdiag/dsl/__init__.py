"""Text format for causal diagrams: ``parser`` reads ``.cdsl`` files, ``writer`` emits them and DOT."""
