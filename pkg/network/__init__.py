# Network model package
