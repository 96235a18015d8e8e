package com.example.filestore.io;

import java.io.ByteArrayOutputStream;
import java.io.File;
import java.io.FileInputStream;
import java.io.IOException;
import java.io.InputStream;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/**
 * Reads a chunk file sequentially in fixed-size blocks.
 */
public class ChunkReader {

    private static final Logger log = LoggerFactory.getLogger(ChunkReader.class);

    private final File file;
    private final int blockSize;
    private InputStream in;

    public ChunkReader(File file, int blockSize) {
        this.file = file;
        this.blockSize = blockSize;
    }

    /**
     * Reads the whole file into memory.
     */
    public byte[] readAll() throws IOException {
        ensureOpen();
        ByteArrayOutputStream buffer = new ByteArrayOutputStream();
        byte[] block = new byte[blockSize];
        int total = 0;
        while (true) {
            int n = in.read(block);
            if (n < 0) {
                break;
            }
            buffer.write(block, 0, n);
            total += n;
            if (total % (blockSize * 128) == 0) {
                log.trace("Read {} bytes from {}", total, file);
            }
        }
        log.debug("Finished reading " + total + " bytes from " + file);
        return buffer.toByteArray();
    }

    private void ensureOpen() throws IOException {
        if (in == null) {
            try {
                in = new FileInputStream(file);
            } catch (IOException e) {
                log.error("Cannot open chunk file " + file, e);
                throw e;
            }
        }
    }

    public void close() {
        if (in != null) {
            try {
                in.close();
            } catch (IOException e) {
                log.warn("Error closing reader for " + file, e);
            }
            in = null;
        }
    }
}
