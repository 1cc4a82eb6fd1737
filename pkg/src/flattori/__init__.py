"""Laplacian spectra of flat tori, the laminated candidate family, and tools
to certify and search for tori with large volume-normalized eigenvalues."""
