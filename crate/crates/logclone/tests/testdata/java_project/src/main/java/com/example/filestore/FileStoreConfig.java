package com.example.filestore;

/**
 * Immutable store settings.
 */
public class FileStoreConfig {

    public static final int DEFAULT_CHUNK_SIZE = 64 * 1024;

    private final int chunkSize;
    private final int maxRetries;
    private final boolean fsyncOnWrite;

    public FileStoreConfig(int chunkSize, int maxRetries, boolean fsyncOnWrite) {
        if (chunkSize <= 0) {
            throw new IllegalArgumentException("chunkSize must be positive");
        }
        this.chunkSize = chunkSize;
        this.maxRetries = maxRetries;
        this.fsyncOnWrite = fsyncOnWrite;
    }

    public static FileStoreConfig defaults() {
        return new FileStoreConfig(DEFAULT_CHUNK_SIZE, 3, true);
    }

    public int getChunkSize() {
        return chunkSize;
    }

    public int getMaxRetries() {
        return maxRetries;
    }

    public boolean isFsyncOnWrite() {
        return fsyncOnWrite;
    }
}
