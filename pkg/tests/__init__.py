# Tests package for abhlab
