package com.example.filestore.io;

import java.io.File;
import java.io.FileOutputStream;
import java.io.IOException;
import java.io.OutputStream;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/**
 * Writes a chunk file sequentially in fixed-size blocks.
 */
public class ChunkWriter {

    private static final Logger log = LoggerFactory.getLogger(ChunkWriter.class);

    private final File file;
    private final int blockSize;
    private OutputStream out;

    public ChunkWriter(File file, int blockSize) {
        this.file = file;
        this.blockSize = blockSize;
    }

    /**
     * Writes the whole value to the file.
     */
    public void writeAll(byte[] value) throws IOException {
        ensureOpen();
        int offset = 0;
        int total = 0;
        while (offset < value.length) {
            int n = Math.min(blockSize, value.length - offset);
            out.write(value, offset, n);
            offset += n;
            total += n;
            if (total % (blockSize * 128) == 0) {
                log.trace("Wrote {} bytes to {}", total, file);
            }
        }
        log.debug("Finished writing " + total + " bytes to " + file);
    }

    private void ensureOpen() throws IOException {
        if (out == null) {
            try {
                out = new FileOutputStream(file);
            } catch (IOException e) {
                log.error("Cannot open chunk file " + file, e);
                throw e;
            }
        }
    }

    public void close() {
        if (out != null) {
            try {
                out.close();
            } catch (IOException e) {
                log.warn("Error closing writer for " + file, e);
            }
            out = null;
        }
    }
}
